#include "nonholo/chart.hpp"

#include <cmath>
#include <sstream>

#include "nonholo/errors.hpp"

namespace nonholo {

namespace {

template <int N, int Depth>
struct JetType {
  using type = Dual<typename JetType<N, Depth - 1>::type, N>;
};
template <int N>
struct JetType<N, 0> {
  using type = double;
};

// Partial derivative d_{idx[0]} d_{idx[1]} ... of a nested dual value.
template <class T>
double partial(const T& x, const int* idx, int count) {
  if constexpr (is_dual<T>::value) {
    if (count == 0) return partial(x.v, idx, 0);
    return partial(x.d[idx[0]], idx + 1, count - 1);
  } else {
    return x;
  }
}

template <int N, int Depth>
std::vector<typename JetType<N, Depth>::type> evaluate_all(const std::vector<Expression>& exprs,
                                                           const Coord& q) {
  using T = typename JetType<N, Depth>::type;
  std::array<T, N> vars;
  for (int k = 0; k < N; ++k) vars[k] = Seed<T>::variable(q[k], k);
  std::vector<T> out;
  out.reserve(exprs.size());
  for (const auto& e : exprs) out.push_back(e.evaluate<T>(std::span<const T>(vars.data(), N)));
  return out;
}

// Fill a jet of the requested order. For maps the triad is itself the first
// derivative of x, so every index list starts with mu.
template <int N, int Depth>
TriadJet build_jet(const std::vector<Expression>& exprs, const Coord& q, int ambient, int order,
                   bool is_map) {
  auto values = evaluate_all<N, Depth>(exprs, q);
  TriadJet jet;
  jet.order = order;
  jet.e = Mat::Zero(ambient, N);
  if (order >= 1) jet.de = Tensor3({N, ambient, N});
  if (order >= 2) jet.dde = Tensor4({N, N, ambient, N});

  auto component = [&](int i, int mu) -> const auto& {
    return is_map ? values[i] : values[i * N + mu];
  };
  for (int i = 0; i < ambient; ++i) {
    for (int mu = 0; mu < N; ++mu) {
      const auto& x = component(i, mu);
      int idx[4];
      int base = 0;
      if (is_map) idx[base++] = mu;
      jet.e(i, mu) = partial(x, idx, base);
      if (order >= 1) {
        for (int l = 0; l < N; ++l) {
          idx[base] = l;
          jet.de(l, i, mu) = partial(x, idx, base + 1);
        }
      }
      if (order >= 2) {
        for (int s = 0; s < N; ++s) {
          for (int l = 0; l < N; ++l) {
            idx[base] = s;
            idx[base + 1] = l;
            jet.dde(s, l, i, mu) = partial(x, idx, base + 2);
          }
        }
      }
    }
  }
  return jet;
}

template <int N>
TriadJet jet_for_dim(const std::vector<Expression>& exprs, const Coord& q, int ambient, int order,
                     bool is_map) {
  int depth = order + (is_map ? 1 : 0);
  switch (depth) {
    case 0: return build_jet<N, 0>(exprs, q, ambient, order, is_map);
    case 1: return build_jet<N, 1>(exprs, q, ambient, order, is_map);
    case 2: return build_jet<N, 2>(exprs, q, ambient, order, is_map);
    case 3: return build_jet<N, 3>(exprs, q, ambient, order, is_map);
    default: throw Error(ErrorKind::Validation, "triad derivative order must be 0, 1 or 2");
  }
}

std::string format_point(const Coord& q) {
  std::ostringstream os;
  os << "(";
  for (int k = 0; k < q.size(); ++k) os << (k ? ", " : "") << q[k];
  os << ")";
  return os.str();
}

}  // namespace

Chart::Chart(ChartSpec spec, const Tolerances& tol) : spec_(std::move(spec)), tol_(tol) {
  if (spec_.dim < 1 || spec_.dim > kMaxDim)
    throw Error(ErrorKind::DimensionMismatch,
                "chart dim must be between 1 and " + std::to_string(kMaxDim));
  if (spec_.ambient == 0) spec_.ambient = spec_.dim;
  if (spec_.ambient < spec_.dim)
    throw Error(ErrorKind::DimensionMismatch, "chart ambient dimension must be >= dim");
  std::size_t expected = spec_.kind == ChartKind::HolonomicMap
                             ? static_cast<std::size_t>(spec_.ambient)
                             : static_cast<std::size_t>(spec_.ambient * spec_.dim);
  if (spec_.exprs.size() != expected)
    throw Error(ErrorKind::DimensionMismatch,
                "chart '" + spec_.name + "' expects " + std::to_string(expected) +
                    " expressions, got " + std::to_string(spec_.exprs.size()));
  SymbolTable symbols = SymbolTable::coordinates(spec_.dim, spec_.params);
  exprs_.reserve(spec_.exprs.size());
  for (const auto& text : spec_.exprs) exprs_.push_back(Expression::parse(text, symbols));
  if (spec_.guard) guard_ = Expression::parse(*spec_.guard, symbols);
}

bool Chart::admits(const Coord& q) const {
  if (q.size() != spec_.dim) return false;
  if (!q.allFinite()) return false;
  if (!guard_) return true;
  return (*guard_)(std::span<const double>(q.data(), q.size())) > 0.0;
}

void Chart::require_admitted(const Coord& q) const {
  if (q.size() != spec_.dim)
    throw Error(ErrorKind::DimensionMismatch, "point has " + std::to_string(q.size()) +
                                                  " coordinates, chart dim is " +
                                                  std::to_string(spec_.dim));
  if (!admits(q))
    throw Error(ErrorKind::SingularPoint,
                "point " + format_point(q) + " rejected by chart '" + spec_.name + "'");
}

void Chart::check_triad(const Mat& e, const Coord& q) const {
  double vol = e.rows() == e.cols() ? std::abs(e.determinant())
                                    : std::sqrt(std::max(0.0, (e.transpose() * e).determinant()));
  if (!(vol >= tol_.degenerate_triad_floor))
    throw Error(ErrorKind::DegenerateTriad,
                "degenerate triad at " + format_point(q) + " (volume " + std::to_string(vol) + ")");
}

TriadJet Chart::triad_jet(const Coord& q, int order) const {
  require_admitted(q);
  bool is_map = spec_.kind == ChartKind::HolonomicMap;
  TriadJet jet;
  switch (spec_.dim) {
    case 1: jet = jet_for_dim<1>(exprs_, q, spec_.ambient, order, is_map); break;
    case 2: jet = jet_for_dim<2>(exprs_, q, spec_.ambient, order, is_map); break;
    case 3: jet = jet_for_dim<3>(exprs_, q, spec_.ambient, order, is_map); break;
    case 4: jet = jet_for_dim<4>(exprs_, q, spec_.ambient, order, is_map); break;
  }
  check_triad(jet.e, q);
  return jet;
}

Mat Chart::triad(const Coord& q) const { return triad_jet(q, 0).e; }

Mat Chart::metric(const Coord& q) const {
  Mat e = triad(q);
  return e.transpose() * e;
}

double Chart::volume_element(const Coord& q) const {
  return std::sqrt(metric(q).determinant());
}

Mat Chart::reciprocal_triad(const Coord& q) const {
  Mat e = triad(q);
  if (e.rows() == e.cols()) return e.inverse();
  Mat g = e.transpose() * e;
  return g.inverse() * e.transpose();
}

Vec Chart::map_point(const Coord& q) const {
  if (spec_.kind != ChartKind::HolonomicMap)
    throw Error(ErrorKind::Validation, "chart '" + spec_.name + "' is a triad field, not a map");
  require_admitted(q);
  Vec x(spec_.ambient);
  for (int i = 0; i < spec_.ambient; ++i) x[i] = exprs_[i](std::span<const double>(q.data(), q.size()));
  return x;
}

Chart Chart::with_parameters(const std::map<std::string, double>& params) const {
  ChartSpec spec = spec_;
  for (const auto& [k, v] : params) spec.params[k] = v;
  return Chart(spec, tol_);
}

ChartSpec cartesian_chart_spec(int dim) {
  ChartSpec s;
  s.name = "cartesian";
  s.dim = dim;
  s.kind = ChartKind::HolonomicMap;
  for (int k = 1; k <= dim; ++k) s.exprs.push_back("q" + std::to_string(k));
  return s;
}

ChartSpec polar_chart_spec() {
  ChartSpec s;
  s.name = "polar";
  s.dim = 2;
  s.kind = ChartKind::HolonomicMap;
  s.exprs = {"q1*cos(q2)", "q1*sin(q2)"};
  s.guard = "q1";
  return s;
}

ChartSpec sphere_chart_spec(double radius) {
  ChartSpec s;
  s.name = "sphere";
  s.dim = 2;
  s.ambient = 3;
  s.kind = ChartKind::HolonomicMap;
  s.params = {{"r", radius}};
  s.exprs = {"r*sin(q1)*cos(q2)", "r*sin(q1)*sin(q2)", "r*cos(q1)"};
  s.guard = "sin(q1)";
  return s;
}

ChartSpec ring_chart_spec(double radius) {
  ChartSpec s;
  s.name = "ring";
  s.dim = 1;
  s.ambient = 2;
  s.kind = ChartKind::HolonomicMap;
  s.params = {{"r", radius}};
  s.exprs = {"r*cos(q1)", "r*sin(q1)"};
  return s;
}

ChartSpec synthetic_torsion_chart_spec(double alpha) {
  ChartSpec s;
  s.name = "synthetic_torsion";
  s.dim = 2;
  s.kind = ChartKind::TriadField;
  s.params = {{"alpha", alpha}};
  s.exprs = {"1", "0", "0", "1 + alpha*q1"};
  s.guard = "1 + alpha*q1";
  return s;
}

}  // namespace nonholo
