#include "heis/calculus.hpp"

#include <cmath>
#include <stdexcept>

namespace heis {

struct ScalarField::PolyData {
  Polynomial u;
  std::array<Polynomial, 3> grad;
  std::array<Polynomial, 6> hess;  // 11 12 13 22 23 33
  Polynomial xu, yu, xxu, xyu, yxu, yyu;

  explicit PolyData(Polynomial p) : u(std::move(p)) {
    for (int i = 0; i < 3; ++i) grad[i] = u.derivative(i);
    hess = {grad[0].derivative(0), grad[0].derivative(1), grad[0].derivative(2),
            grad[1].derivative(1), grad[1].derivative(2), grad[2].derivative(2)};
    xu = u.apply_x();
    yu = u.apply_y();
    xxu = xu.apply_x();
    xyu = yu.apply_x();
    yxu = xu.apply_y();
    yyu = yu.apply_y();
  }
};

ScalarField::ScalarField() : poly_(std::make_shared<const PolyData>(Polynomial())), label_("0") {}

ScalarField ScalarField::polynomial(Polynomial p) {
  ScalarField f;
  f.poly_ = std::make_shared<const PolyData>(std::move(p));
  f.label_ = f.poly_->u.to_string();
  return f;
}

ScalarField ScalarField::function(Function fn, double h_fd, std::string label) {
  if (!(h_fd > 0.0)) throw std::invalid_argument("ScalarField: finite-difference step must be positive");
  ScalarField f;
  f.poly_.reset();
  f.fn_ = std::move(fn);
  f.h_fd_ = h_fd;
  f.label_ = std::move(label);
  return f;
}

const Polynomial* ScalarField::polynomial_form() const { return poly_ ? &poly_->u : nullptr; }

std::string ScalarField::describe() const { return label_; }

double ScalarField::operator()(const Point& p) const { return poly_ ? poly_->u(p) : fn_(p); }

namespace {

double checked(double v) {
  if (!std::isfinite(v)) throw std::domain_error("ScalarField: non-finite value in finite-difference stencil");
  return v;
}

Point shifted(Point p, int axis, double h) {
  (axis == 0 ? p.x1 : axis == 1 ? p.x2 : p.x3) += h;
  return p;
}

}  // namespace

Vec3 ScalarField::gradient(const Point& p) const {
  if (poly_) return {poly_->grad[0](p), poly_->grad[1](p), poly_->grad[2](p)};
  const double h = h_fd_;
  Vec3 g{};
  for (int i = 0; i < 3; ++i)
    g[i] = (checked(fn_(shifted(p, i, h))) - checked(fn_(shifted(p, i, -h)))) / (2.0 * h);
  return g;
}

Sym3 ScalarField::hessian(const Point& p) const {
  if (poly_) {
    const auto& h = poly_->hess;
    return {h[0](p), h[1](p), h[2](p), h[3](p), h[4](p), h[5](p)};
  }
  const double h = h_fd_;
  const double center = checked(fn_(p));
  double m[3][3];
  for (int i = 0; i < 3; ++i) {
    m[i][i] = (checked(fn_(shifted(p, i, h))) - 2.0 * center + checked(fn_(shifted(p, i, -h)))) / (h * h);
    for (int j = i + 1; j < 3; ++j) {
      const double pp = checked(fn_(shifted(shifted(p, i, h), j, h)));
      const double pm = checked(fn_(shifted(shifted(p, i, h), j, -h)));
      const double mp = checked(fn_(shifted(shifted(p, i, -h), j, h)));
      const double mm = checked(fn_(shifted(shifted(p, i, -h), j, -h)));
      m[i][j] = (pp - pm - mp + mm) / (4.0 * h * h);
    }
  }
  return {m[0][0], m[0][1], m[0][2], m[1][1], m[1][2], m[2][2]};
}

Vec2 ScalarField::horizontal_gradient(const Point& p) const {
  if (poly_) return {poly_->xu(p), poly_->yu(p)};
  const Vec3 g = gradient(p);
  return {dot(g, field_x(p)), dot(g, field_y(p))};
}

Sym2 ScalarField::horizontal_hessian(const Point& p) const {
  if (poly_) return {poly_->xxu(p), 0.5 * (poly_->xyu(p) + poly_->yxu(p)), poly_->yyu(p)};
  return lift(hessian(p), p);
}

HorizontalGradient h_gradient(const ScalarField& u, const Point& p) { return u.horizontal_gradient(p); }

Sym2 h_hessian(const ScalarField& u, const Point& p) { return u.horizontal_hessian(p); }

Sym2 lift(const Sym3& a, const Point& p) {
  const Vec3 x = field_x(p);
  const Vec3 y = field_y(p);
  const Vec3 ax = a.apply(x);
  return {dot(ax, x), dot(ax, y), a.quad(y)};
}

Sym3 full_hessian(const ScalarField& u, const Point& p) { return u.hessian(p); }

double sublaplacian(const ScalarField& u, const Point& p) { return h_hessian(u, p).trace(); }

}  // namespace heis
