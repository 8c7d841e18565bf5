#include <cctype>
#include <charconv>
#include <cmath>
#include <set>
#include <system_error>

#include "gsmooth/cli/spec.hpp"
#include "gsmooth/errors.hpp"
#include "gsmooth/format.hpp"
#include "gsmooth/problems.hpp"

namespace gsmooth::cli {

ParseError::ParseError(const std::string& message, std::string token, std::size_t position)
    : std::runtime_error(message + " (token '" + token + "' at position " + std::to_string(position) + ")"),
      token_(std::move(token)),
      position_(position) {}

namespace {

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

class Cursor {
 public:
  explicit Cursor(std::string_view text) : text_(text) {}

  bool done() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }
  std::size_t pos() const { return pos_; }

  std::string identifier(const char* what) {
    const std::size_t start = pos_;
    if (done() || !is_ident_start(peek())) throw ParseError(std::string("expected ") + what, rest(), start);
    while (!done() && is_ident(peek())) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  std::string value() {
    const std::size_t start = pos_;
    while (!done() && peek() != ',' && peek() != '=' && peek() != ':' &&
           !std::isspace(static_cast<unsigned char>(peek()))) {
      ++pos_;
    }
    if (pos_ == start) throw ParseError("expected a value", rest(), start);
    return std::string(text_.substr(start, pos_ - start));
  }

  void expect(char c) {
    if (done() || peek() != c) throw ParseError(std::string("expected '") + c + "'", rest(), pos_);
    ++pos_;
  }

  std::string rest() const { return done() ? std::string("<end>") : std::string(text_.substr(pos_, 12)); }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

// Typed access to a spec's arguments; finish() rejects keys never asked for.
class Args {
 public:
  explicit Args(const Spec& spec) : spec_(spec) {}

  bool has(const std::string& key) {
    used_.insert(key);
    return spec_.args.count(key) > 0;
  }

  std::optional<double> number(const std::string& key) {
    if (!has(key)) return std::nullopt;
    return to_number(key, spec_.args.at(key));
  }

  double number(const std::string& key, double fallback) { return number(key).value_or(fallback); }

  double required(const std::string& key) {
    if (auto v = number(key)) return *v;
    throw ParseError("missing required key '" + key + "' for " + spec_.name, spec_.name, 0);
  }

  std::int64_t integer(const std::string& key, std::int64_t fallback) {
    if (!has(key)) return fallback;
    const std::string& text = spec_.args.at(key);
    std::int64_t out = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), out);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
      throw ParseError("'" + key + "' must be an integer", text, value_pos(key));
    }
    return out;
  }

  Vector vector(const std::string& key) {
    if (!has(key)) throw ParseError("missing required key '" + key + "' for " + spec_.name, spec_.name, 0);
    const std::string& text = spec_.args.at(key);
    Vector out;
    std::size_t start = 0;
    while (true) {
      const std::size_t end = text.find(';', start);
      out.push_back(to_number(key, text.substr(start, end - start)));
      if (end == std::string::npos) break;
      start = end + 1;
    }
    return out;
  }

  std::string word(const std::string& key, const std::string& fallback, std::initializer_list<const char*> allowed) {
    if (!has(key)) return fallback;
    const std::string& text = spec_.args.at(key);
    for (const char* a : allowed) {
      if (text == a) return text;
    }
    std::string list;
    for (const char* a : allowed) list += (list.empty() ? "" : "|") + std::string(a);
    throw ParseError("'" + key + "' must be one of " + list, text, value_pos(key));
  }

  void positive(const std::string& key, double v) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ParseError(key + " must be positive", spec_.args.at(key), value_pos(key));
  }

  void finish() const {
    for (const auto& [key, value] : spec_.args) {
      if (!used_.count(key)) {
        throw ParseError("unknown key '" + key + "' for " + spec_.name, key, spec_.positions.at(key).first);
      }
    }
  }

  std::size_t value_pos(const std::string& key) const {
    const auto it = spec_.positions.find(key);
    return it == spec_.positions.end() ? 0 : it->second.second;
  }

 private:
  double to_number(const std::string& key, const std::string& text) const {
    double out = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), out);
    if (text.empty() || res.ec != std::errc() || res.ptr != text.data() + text.size() || !std::isfinite(out)) {
      throw ParseError("'" + key + "' must be a finite number", text.empty() ? "<empty>" : text, value_pos(key));
    }
    return out;
  }

  const Spec& spec_;
  std::set<std::string> used_;
};

std::size_t dimension(Args& args) {
  const std::int64_t d = args.integer("d", 2);
  if (d < 1) throw ParseError("d must be at least 1", std::to_string(d), args.value_pos("d"));
  return static_cast<std::size_t>(d);
}

}  // namespace

Spec parse_spec(std::string_view text) {
  Spec spec;
  spec.source = std::string(text);
  Cursor cur(text);
  spec.name = cur.identifier("a name");
  if (cur.done()) return spec;
  cur.expect(':');
  while (true) {
    const std::size_t key_pos = cur.pos();
    std::string key = cur.identifier("a key");
    cur.expect('=');
    const std::size_t value_pos = cur.pos();
    std::string value = cur.value();
    if (spec.args.count(key)) throw ParseError("duplicate key '" + key + "'", key, key_pos);
    spec.positions[key] = {key_pos, value_pos};
    spec.args[key] = std::move(value);
    if (cur.done()) break;
    cur.expect(',');
  }
  return spec;
}

std::string serialize_spec(const Spec& spec) {
  std::string out = spec.name;
  char sep = ':';
  for (const auto& [key, value] : spec.args) {
    out += sep;
    out += key + "=" + value;
    sep = ',';
  }
  return out;
}

Objective parse_problem(std::string_view text) {
  const Spec spec = parse_spec(text);
  Args args(spec);
  const auto build = [&]() -> Objective {
    if (spec.name == "power_norm" || spec.name == "separable_pnorm") {
      const std::size_t d = dimension(args);
      const double p = args.required("p");
      const double l1 = args.required("l1");
      args.finish();
      return spec.name == "power_norm" ? problems::power_norm(d, p, l1) : problems::separable_pnorm(d, p, l1);
    }
    if (spec.name == "logistic") {
      const double l1 = args.required("l1");
      args.finish();
      return problems::logistic_1d(l1);
    }
    if (spec.name == "affine_logistic") {
      const Vector a = args.vector("a");
      const double b = args.number("b", 0.0);
      const double l1 = args.required("l1");
      args.finish();
      return problems::affine_logistic(a, b, l1);
    }
    if (spec.name == "exp_phi") {
      const std::size_t d = dimension(args);
      const double l0 = args.required("l0");
      const double l1 = args.required("l1");
      args.finish();
      return problems::exp_phi(d, SmoothnessParams(l0, l1));
    }
    if (spec.name == "quadratic") {
      const std::size_t d = dimension(args);
      args.finish();
      return problems::quadratic(d);
    }
    throw ParseError("unknown problem '" + spec.name + "'", spec.name, 0);
  };
  try {
    return build();
  } catch (const std::invalid_argument& e) {
    // Constructor messages start with the offending key ("p must exceed 2").
    const std::string msg = e.what();
    const std::string key = msg.substr(0, msg.find(' '));
    if (spec.args.count(key)) throw ParseError(msg, spec.args.at(key), args.value_pos(key));
    throw ParseError(msg, spec.name, 0);
  }
}

MethodSpec parse_method(std::string_view text) {
  MethodSpec m;
  m.spec = parse_spec(text);
  Args args(m.spec);
  const auto overrides = [&] {
    m.l0 = args.number("l0");
    m.l1 = args.number("l1");
    if (m.l0 && !(*m.l0 >= 0.0)) throw ParseError("l0 must be nonnegative", m.spec.args.at("l0"), args.value_pos("l0"));
    if (m.l1 && !(*m.l1 >= 0.0)) throw ParseError("l1 must be nonnegative", m.spec.args.at("l1"), args.value_pos("l1"));
  };
  const auto line_search = [&] {
    m.line_search.tol = args.number("ls_tol", m.line_search.tol);
    if (args.has("ls_tol")) args.positive("ls_tol", m.line_search.tol);
    const std::int64_t max_evals = args.integer("ls_max", m.line_search.max_evals);
    if (max_evals < 2) throw ParseError("ls_max must be at least 2", m.spec.args.at("ls_max"), args.value_pos("ls_max"));
    m.line_search.max_evals = static_cast<int>(max_evals);
  };
  const auto l_const = [&] {
    m.l_const = args.number("L");
    if (m.l_const) args.positive("L", *m.l_const);
  };

  const std::string& name = m.spec.name;
  if (name == "gd") {
    m.kind = MethodKind::Gd;
    m.rule = args.word("rule", "optimal", {"optimal", "simplified", "clipped"});
    overrides();
  } else if (name == "ngd") {
    m.kind = MethodKind::Ngd;
    m.r_hat = args.number("r_hat");
    if (m.r_hat) args.positive("r_hat", *m.r_hat);
    const std::string s = args.word("schedule", "fixed", {"fixed", "sqrt", "linear"});
    m.schedule = s == "fixed" ? NgdSchedule::FixedHorizon
                 : s == "sqrt" ? NgdSchedule::DecayingSqrt
                               : NgdSchedule::DecayingLinear;
  } else if (name == "polyak") {
    m.kind = MethodKind::Polyak;
    m.f_star = args.number("f_star");
  } else if (name == "agmsdr") {
    m.kind = MethodKind::Agmsdr;
    l_const();
    m.rule = args.word("rule", "plain", {"plain", "optimal", "simplified", "clipped"});
    line_search();
    overrides();
  } else if (name == "two_stage") {
    m.kind = MethodKind::TwoStage;
    l_const();
    if (args.has("L_factor")) {
      if (m.l_const) throw ParseError("give L or L_factor, not both", "L_factor", m.spec.positions.at("L_factor").first);
      m.l_factor = *args.number("L_factor");
      args.positive("L_factor", m.l_factor);
    }
    m.rule = args.word("rule", "simplified", {"optimal", "simplified", "clipped"});
    if (args.has("target")) {
      m.target = args.word("target", "", {"gap", "grad"}) == "gap" ? Stage1Target::FunctionGap : Stage1Target::GradNorm;
    }
    line_search();
    overrides();
  } else {
    throw ParseError("unknown method '" + name + "'", name, 0);
  }
  args.finish();
  return m;
}

SmoothnessParams method_params(const MethodSpec& m, const Objective& f) {
  const std::optional<SmoothnessParams>& base = f.params();
  if (!base && !(m.l0 && m.l1)) {
    throw Unsupported("method needs (L0, L1): '" + f.name() + "' has no constants and the spec gives none");
  }
  return SmoothnessParams(m.l0 ? *m.l0 : base->l0(), m.l1 ? *m.l1 : base->l1());
}

namespace {

StepRule gradient_rule(const std::string& name, const SmoothnessParams& p) {
  if (name == "optimal") return rules::Optimal{p};
  if (name == "simplified") return rules::Simplified{p};
  return rules::Clipped{p};
}

}  // namespace

Trace run_method(const MethodSpec& m, const Objective& f, std::span<const double> x0, std::int64_t budget,
                 double grad_tol) {
  switch (m.kind) {
    case MethodKind::Gd:
      return gd_run(f, gradient_rule(m.rule, method_params(m, f)), x0, budget, grad_tol);
    case MethodKind::Polyak:
      if (!m.f_star && !f.f_star()) throw Unsupported("Polyak stepsizes need f* and '" + f.name() + "' has none");
      return gd_run(f, rules::Polyak{m.f_star}, x0, budget, grad_tol);
    case MethodKind::Ngd: {
      double r_hat = 0.0;
      if (m.r_hat) {
        r_hat = *m.r_hat;
      } else if (f.x_star()) {
        r_hat = distance(x0, *f.x_star());
        if (!(r_hat > 0.0)) throw Unsupported("x0 is the minimizer; give r_hat explicitly");
      } else {
        throw Unsupported("normalized GD needs r_hat since '" + f.name() + "' has no known minimizer");
      }
      return ngd_run(f, r_hat, m.schedule, x0, budget);
    }
    case MethodKind::Agmsdr: {
      AgmsdrConfig cfg;
      cfg.line_search = m.line_search;
      cfg.grad_tol = grad_tol;
      if (m.rule != "plain") cfg.t_rule = gradient_rule(m.rule, method_params(m, f));
      if (m.l_const) {
        cfg.l_const = *m.l_const;
      } else {
        const SmoothnessParams p = method_params(m, f);
        if (!(p.l0() > 0.0)) throw Unsupported("agmsdr needs L when L0 = 0");
        cfg.l_const = p.l0();
      }
      return agmsdr_run(f, x0, cfg, budget);
    }
    case MethodKind::TwoStage: {
      const SmoothnessParams p = method_params(m, f);
      TwoStageConfig cfg = TwoStageConfig::defaults(f, p, m.l_factor);
      if (m.l_const) cfg.l_const = *m.l_const;
      cfg.stage1_rule = gradient_rule(m.rule, p);
      if (m.target) cfg.stage1_target = *m.target;
      cfg.line_search = m.line_search;
      cfg.grad_tol = grad_tol;
      return two_stage_run(f, x0, p, cfg, budget);
    }
  }
  throw std::logic_error("unhandled method kind");
}

}  // namespace gsmooth::cli
