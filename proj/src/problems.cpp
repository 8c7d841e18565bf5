#include "gsmooth/problems.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

#include "gsmooth/format.hpp"

namespace gsmooth::problems {
namespace {

// ln(1 + e^t) without overflow.
double softplus(double t) {
  if (t > 30.0) return t + std::log1p(std::exp(-t));
  return std::log1p(std::exp(t));
}

double sigmoid(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

}  // namespace

Objective power_norm(std::size_t dim, double p, double l1) {
  if (!(p > 2.0) || !std::isfinite(p)) throw std::invalid_argument("p must exceed 2");
  if (!(l1 > 0.0) || !std::isfinite(l1)) throw std::invalid_argument("l1 must be positive");
  if (dim == 0) throw std::invalid_argument("dimension must be positive");

  auto value = [p](std::span<const double> x) { return std::pow(squared_norm(x), p / 2.0) / p; };
  auto gradient = [p](std::span<const double> x) {
    Vector g(x.begin(), x.end());
    scale(std::pow(squared_norm(x), (p - 2.0) / 2.0), g);
    return g;
  };
  auto hessian = [p, dim](std::span<const double> x) {
    const double r = norm(x);
    SymMatrix h(dim);
    if (r == 0.0) return h;
    const Vector u = combine(Vector(dim, 0.0), 1.0 / r, x);
    h = SymMatrix::identity(dim);
    h.add_outer(p - 2.0, u);
    h.scale(std::pow(r, p - 2.0));
    return h;
  };

  const double l0 = std::pow((p - 2.0) / l1, p - 2.0);
  return Objective("power_norm(d=" + std::to_string(dim) + ",p=" + format_double(p) +
                       ",l1=" + format_double(l1) + ")",
                   dim, value, gradient)
      .with_hessian(hessian)
      .with_params(SmoothnessParams(l0, l1))
      .with_f_star(0.0)
      .with_x_star(Vector(dim, 0.0));
}

Objective logistic_1d(double l1) {
  if (!(l1 >= 0.0 && l1 <= 1.0)) throw std::invalid_argument("l1 must lie in [0, 1]");
  auto value = [](std::span<const double> x) { return softplus(x[0]); };
  auto gradient = [](std::span<const double> x) { return Vector{sigmoid(x[0])}; };
  auto hessian = [](std::span<const double> x) {
    SymMatrix h(1);
    h(0, 0) = sigmoid(x[0]) * sigmoid(-x[0]);
    return h;
  };
  return Objective("logistic(l1=" + format_double(l1) + ")", 1, value, gradient)
      .with_hessian(hessian)
      .with_params(SmoothnessParams((1.0 - l1) * (1.0 - l1) / 4.0, l1));
}

Objective affine_logistic(const Vector& a, double b, double l1) {
  const double a_norm = norm(a);
  if (!(a_norm > 0.0)) throw std::invalid_argument("affine_logistic needs a nonzero direction a");
  if (!(l1 >= 0.0)) throw std::invalid_argument("l1 must be nonnegative");
  if (l1 > a_norm) throw std::invalid_argument("l1 must not exceed ||a|| = " + format_double(a_norm));

  auto av = std::make_shared<const Vector>(a);
  auto value = [av, b](std::span<const double> x) { return softplus(dot(*av, x) + b); };
  auto gradient = [av, b](std::span<const double> x) {
    return combine(Vector(av->size(), 0.0), sigmoid(dot(*av, x) + b), *av);
  };
  auto hessian = [av, b](std::span<const double> x) {
    const double t = dot(*av, x) + b;
    SymMatrix h(av->size());
    h.add_outer(sigmoid(t) * sigmoid(-t), *av);
    return h;
  };
  const double gap = a_norm - l1;
  return Objective("affine_logistic(d=" + std::to_string(a.size()) + ",l1=" + format_double(l1) + ")",
                   a.size(), value, gradient)
      .with_hessian(hessian)
      .with_params(SmoothnessParams(gap * gap / 4.0, l1));
}

Objective exp_phi(std::size_t dim, const SmoothnessParams& p) {
  if (p.l1() == 0.0) throw std::invalid_argument("exp_phi needs L1 > 0 (use a quadratic for L1 = 0)");
  if (p.l0() == 0.0) throw std::invalid_argument("exp_phi needs L0 > 0");
  if (dim == 0) throw std::invalid_argument("dimension must be positive");
  const double l0 = p.l0();
  const double l1 = p.l1();

  auto value = [l0, l1](std::span<const double> x) { return l0 / (l1 * l1) * phi(l1 * norm(x)); };
  auto gradient = [l0, l1](std::span<const double> x) {
    const double r = norm(x);
    Vector g(x.size(), 0.0);
    if (r == 0.0) return g;
    return combine(g, l0 / l1 * std::expm1(l1 * r) / r, x);
  };
  auto hessian = [l0, l1, dim](std::span<const double> x) {
    const double r = norm(x);
    if (r == 0.0) return SymMatrix::identity(dim, l0);
    const double radial = l0 * std::exp(l1 * r);
    const double tangential = l0 * std::expm1(l1 * r) / (l1 * r);
    const Vector u = combine(Vector(dim, 0.0), 1.0 / r, x);
    SymMatrix h = SymMatrix::identity(dim, tangential);
    h.add_outer(radial - tangential, u);
    return h;
  };
  return Objective("exp_phi(d=" + std::to_string(dim) + ",l0=" + format_double(l0) + ",l1=" +
                       format_double(l1) + ")",
                   dim, value, gradient)
      .with_hessian(hessian)
      .with_params(p)
      .with_f_star(0.0)
      .with_x_star(Vector(dim, 0.0));
}

Objective quadratic(std::size_t dim) {
  if (dim == 0) throw std::invalid_argument("dimension must be positive");
  return diagonal_quadratic(Vector(dim, 1.0)).with_name("quadratic(d=" + std::to_string(dim) + ")");
}

Objective diagonal_quadratic(const Vector& weights) {
  if (weights.empty()) throw std::invalid_argument("dimension must be positive");
  for (double w : weights) {
    if (!(w > 0.0) || !std::isfinite(w)) throw std::invalid_argument("quadratic weights must be positive");
  }
  auto w = std::make_shared<const Vector>(weights);
  auto value = [w](std::span<const double> x) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += (*w)[i] * x[i] * x[i];
    return s / 2.0;
  };
  auto gradient = [w](std::span<const double> x) {
    Vector g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) g[i] = (*w)[i] * x[i];
    return g;
  };
  auto hessian = [w](std::span<const double>) {
    SymMatrix h(w->size());
    for (std::size_t i = 0; i < w->size(); ++i) h(i, i) = (*w)[i];
    return h;
  };
  const double l0 = *std::max_element(weights.begin(), weights.end());
  return Objective("diagonal_quadratic(d=" + std::to_string(weights.size()) + ")", weights.size(), value,
                   gradient)
      .with_hessian(hessian)
      .with_params(SmoothnessParams(l0, 0.0))
      .with_f_star(0.0)
      .with_x_star(Vector(weights.size(), 0.0));
}

SoftMax softmax(const std::vector<Vector>& rows, const Vector& offsets, double mu) {
  if (rows.empty()) throw std::invalid_argument("softmax needs at least one row");
  if (offsets.size() != rows.size()) throw std::invalid_argument("softmax offsets/rows size mismatch");
  if (!(mu > 0.0)) throw std::invalid_argument("softmax temperature must be positive");
  const std::size_t dim = rows.front().size();
  double max_row = 0.0;
  for (const auto& r : rows) {
    if (r.size() != dim) throw std::invalid_argument("softmax rows must share a dimension");
    max_row = std::max(max_row, norm(r));
  }
  struct Data {
    std::vector<Vector> rows;
    Vector offsets;
    double mu;
    // scaled arguments and the log-sum-exp shift
    Vector logits(std::span<const double> x, double& shift) const {
      Vector z(rows.size());
      for (std::size_t i = 0; i < rows.size(); ++i) z[i] = (dot(rows[i], x) + offsets[i]) / mu;
      shift = *std::max_element(z.begin(), z.end());
      return z;
    }
    Vector weights(std::span<const double> x) const {
      double shift = 0.0;
      Vector w = logits(x, shift);
      double total = 0.0;
      for (auto& v : w) total += (v = std::exp(v - shift));
      scale(1.0 / total, w);
      return w;
    }
  };
  auto data = std::make_shared<const Data>(Data{rows, offsets, mu});

  auto value = [data](std::span<const double> x) {
    double shift = 0.0;
    const Vector z = data->logits(x, shift);
    double total = 0.0;
    for (double v : z) total += std::exp(v - shift);
    return data->mu * (shift + std::log(total));
  };
  auto gradient = [data, dim](std::span<const double> x) {
    const Vector w = data->weights(x);
    Vector g(dim, 0.0);
    for (std::size_t i = 0; i < w.size(); ++i) axpy(w[i], data->rows[i], g);
    return g;
  };
  auto hessian = [data, dim](std::span<const double> x) {
    const Vector w = data->weights(x);
    Vector mean(dim, 0.0);
    SymMatrix h(dim);
    for (std::size_t i = 0; i < w.size(); ++i) {
      axpy(w[i], data->rows[i], mean);
      h.add_outer(w[i], data->rows[i]);
    }
    h.add_outer(-1.0, mean);
    h.scale(1.0 / data->mu);
    return h;
  };
  Objective obj = Objective("softmax(m=" + std::to_string(rows.size()) + ",mu=" + format_double(mu) + ")",
                            dim, value, gradient)
                      .with_hessian(hessian);
  return SoftMax{std::move(obj), max_row * max_row / mu, max_row};
}

Objective sum_with_smooth(const Objective& f, const Objective& g, double g_lip_grad, double g_lip_value) {
  if (f.dim() != g.dim()) throw std::invalid_argument("sum_with_smooth: dimension mismatch");
  if (!f.params()) throw std::invalid_argument("sum_with_smooth: f must carry (L0, L1) constants");
  if (!(g_lip_grad >= 0.0) || !(g_lip_value >= 0.0)) {
    throw std::invalid_argument("sum_with_smooth: Lipschitz constants must be nonnegative");
  }
  auto value = [f, g](std::span<const double> x) { return f.value(x) + g.value(x); };
  auto gradient = [f, g](std::span<const double> x) {
    Vector out = f.gradient(x);
    axpy(1.0, g.gradient(x), out);
    return out;
  };
  const SmoothnessParams& p = *f.params();
  Objective sum = Objective("sum(" + f.name() + "," + g.name() + ")", f.dim(), value, gradient)
                      .with_params(SmoothnessParams(p.l0() + g_lip_value * p.l1() + g_lip_grad, p.l1()));
  if (f.has_hessian() && g.has_hessian()) {
    sum = sum.with_hessian([f, g](std::span<const double> x) {
      SymMatrix h = f.hessian(x);
      h.add(g.hessian(x));
      return h;
    });
  }
  return sum;
}

Objective separable_sum(const std::vector<Objective>& parts) {
  if (parts.empty()) throw std::invalid_argument("separable_sum needs at least one part");
  std::vector<std::size_t> offsets;
  std::size_t dim = 0;
  double l0 = 0.0;
  double l1 = 0.0;
  bool all_hessian = true;
  bool all_f_star = true;
  bool all_x_star = true;
  std::string name = "separable(";
  for (const auto& part : parts) {
    if (!part.params()) throw std::invalid_argument("separable_sum: every part must carry (L0, L1)");
    offsets.push_back(dim);
    dim += part.dim();
    l0 = std::max(l0, part.params()->l0());
    l1 = std::max(l1, part.params()->l1());
    all_hessian = all_hessian && part.has_hessian();
    all_f_star = all_f_star && part.f_star().has_value();
    all_x_star = all_x_star && part.x_star().has_value();
    name += (offsets.size() > 1 ? "," : "") + part.name();
  }
  name += ")";
  auto shared = std::make_shared<const std::vector<Objective>>(parts);
  auto offs = std::make_shared<const std::vector<std::size_t>>(offsets);

  auto value = [shared, offs](std::span<const double> x) {
    double s = 0.0;
    for (std::size_t i = 0; i < shared->size(); ++i) {
      s += (*shared)[i].value(x.subspan((*offs)[i], (*shared)[i].dim()));
    }
    return s;
  };
  auto gradient = [shared, offs, dim](std::span<const double> x) {
    Vector g(dim);
    for (std::size_t i = 0; i < shared->size(); ++i) {
      const Vector gi = (*shared)[i].gradient(x.subspan((*offs)[i], (*shared)[i].dim()));
      std::copy(gi.begin(), gi.end(), g.begin() + static_cast<std::ptrdiff_t>((*offs)[i]));
    }
    return g;
  };

  Objective h = Objective(name, dim, value, gradient).with_params(SmoothnessParams(l0, l1));
  if (all_hessian) {
    h = h.with_hessian([shared, offs, dim](std::span<const double> x) {
      SymMatrix out(dim);
      for (std::size_t i = 0; i < shared->size(); ++i) {
        const std::size_t o = (*offs)[i];
        const SymMatrix block = (*shared)[i].hessian(x.subspan(o, (*shared)[i].dim()));
        for (std::size_t r = 0; r < block.size(); ++r) {
          for (std::size_t c = 0; c < block.size(); ++c) out(o + r, o + c) = block(r, c);
        }
      }
      return out;
    });
  }
  if (all_f_star) {
    double f_star = 0.0;
    for (const auto& part : parts) f_star += *part.f_star();
    h = h.with_f_star(f_star);
  }
  if (all_x_star) {
    Vector x_star;
    for (const auto& part : parts) x_star.insert(x_star.end(), part.x_star()->begin(), part.x_star()->end());
    h = h.with_x_star(std::move(x_star));
  }
  return h;
}

Objective separable_pnorm(std::size_t dim, double p, double l1) {
  if (dim == 0) throw std::invalid_argument("dimension must be positive");
  std::vector<Objective> parts(dim, power_norm(1, p, l1));
  return separable_sum(parts).with_name("separable_pnorm(d=" + std::to_string(dim) + ",p=" +
                                        format_double(p) + ",l1=" + format_double(l1) + ")");
}

}  // namespace gsmooth::problems
