#include "kernellab/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace kernellab {

namespace {

struct SimpsonCtx {
  const std::function<double(double)>& f;
  double abs_budget;  // total absolute error budget
  int max_depth;
};

double simpson(double fa, double fm, double fb, double h) {
  return h / 6.0 * (fa + 4.0 * fm + fb);
}

double adapt(const SimpsonCtx& ctx, double a, double b, double fa, double fm,
             double fb, double whole, double eps, int depth) {
  if (depth > ctx.max_depth)
    throw std::runtime_error(
        "integrate_adaptive: subdivision limit reached without convergence");
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = ctx.f(lm), frm = ctx.f(rm);
  const double left = simpson(fa, flm, fm, m - a);
  const double right = simpson(fm, frm, fb, b - m);
  const double delta = left + right - whole;
  if (std::abs(delta) <= 15.0 * eps) return left + right + delta / 15.0;
  return adapt(ctx, a, m, fa, flm, fm, left, 0.5 * eps, depth + 1) +
         adapt(ctx, m, b, fm, frm, fb, right, 0.5 * eps, depth + 1);
}

}  // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, double rel_tol, int max_depth) {
  if (!(rel_tol > 0.0))
    throw std::invalid_argument("integrate_adaptive: rel_tol must be positive");
  if (a == b) return 0.0;
  if (a > b) return -integrate_adaptive(f, b, a, rel_tol, max_depth);

  // Coarse pass to convert the relative target into an absolute budget.
  const int pilot = 64;
  double coarse = 0.0;
  {
    const double h = (b - a) / pilot;
    double fl = f(a);
    for (int i = 0; i < pilot; ++i) {
      const double x0 = a + i * h, x1 = x0 + h;
      const double fr = f(x1);
      coarse += simpson(fl, f(0.5 * (x0 + x1)), fr, h);
      fl = fr;
    }
  }
  const double scale = std::max(std::abs(coarse), 1e-300);
  SimpsonCtx ctx{f, rel_tol * scale, max_depth};
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = simpson(fa, fm, fb, b - a);
  return adapt(ctx, a, b, fa, fm, fb, whole, ctx.abs_budget, 0);
}

double integrate_gauss_composite(const std::function<double(double)>& f,
                                 double a, double b, int panels) {
  if (panels < 1)
    throw std::invalid_argument("integrate_gauss_composite: panels < 1");
  // 5-point Gauss-Legendre abscissae/weights on [-1, 1].
  static const double x[5] = {-0.9061798459386639927976269,
                              -0.5384693101056830910363144, 0.0,
                              0.5384693101056830910363144,
                              0.9061798459386639927976269};
  static const double w[5] = {0.2369268850561890875142640,
                              0.4786286704993664680412915,
                              0.5688888888888888888888889,
                              0.4786286704993664680412915,
                              0.2369268850561890875142640};
  const double h = (b - a) / panels;
  double total = 0.0;
  for (int i = 0; i < panels; ++i) {
    const double mid = a + (i + 0.5) * h;
    double s = 0.0;
    for (int k = 0; k < 5; ++k) s += w[k] * f(mid + 0.5 * h * x[k]);
    total += 0.5 * h * s;
  }
  return total;
}

}  // namespace kernellab
