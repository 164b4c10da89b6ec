#include "harmomorph/scalar_field.hpp"

#include <cmath>
#include <sstream>
#include <unordered_map>

namespace harmomorph {

struct ScalarField::Node {
  enum class Kind { Coord, ConjCoord, Constant, Quadratic, Sum, Product, Power, Quotient };

  Kind kind = Kind::Constant;
  int index = -1;
  Cx constant{};
  double exponent = 1.0;
  std::vector<int> signature;
  std::vector<Cx> weights;
  std::vector<std::shared_ptr<const Node>> children;
};

namespace {

using Node = ScalarField::Node;
using Kind = Node::Kind;
using NodePtr = std::shared_ptr<const Node>;

NodePtr make_node(Node node) { return std::make_shared<const Node>(std::move(node)); }

bool is_integer(double p) { return std::floor(p) == p && std::abs(p) < 1e9; }

template <typename C>
C ipow(C base, long long e) {
  if (e < 0) {
    return C(1) / ipow(base, -e);
  }
  C result(1);
  while (e > 0) {
    if (e & 1) result *= base;
    base *= base;
    e >>= 1;
  }
  return result;
}

template <typename Scalar>
class Evaluator {
public:
  using C = std::complex<Scalar>;
  using Jet = Jet2<Scalar>;

  Evaluator(const VectorX<Scalar>& x, int order) : x_(x), order_(order), dim_(x.size()) {}

  const Jet& eval(const NodePtr& node) {
    auto it = cache_.find(node.get());
    if (it != cache_.end()) return it->second;
    Jet jet = compute(*node);
    return cache_.emplace(node.get(), std::move(jet)).first->second;
  }

private:
  Jet zero_jet(C value) const {
    Jet j;
    j.value = value;
    if (order_ >= 1) j.grad = VectorX<C>::Zero(dim_);
    if (order_ >= 2) j.hess = MatrixX<C>::Zero(dim_, dim_);
    return j;
  }

  void check_index(int k) const {
    if (2 * k + 1 >= dim_) {
      throw DimensionMismatch("field references z_" + std::to_string(k + 1) + " but point has " +
                              std::to_string(dim_) + " real coordinates");
    }
  }

  Jet compute(const Node& node) {
    switch (node.kind) {
    case Kind::Constant:
      return zero_jet(C(Scalar(node.constant.real()), Scalar(node.constant.imag())));
    case Kind::Coord:
    case Kind::ConjCoord: {
      check_index(node.index);
      const Scalar sign = node.kind == Kind::Coord ? Scalar(1) : Scalar(-1);
      Jet j = zero_jet(C(x_[2 * node.index], sign * x_[2 * node.index + 1]));
      if (order_ >= 1) {
        j.grad[2 * node.index] = C(1);
        j.grad[2 * node.index + 1] = C(0, sign);
      }
      return j;
    }
    case Kind::Quadratic: {
      Scalar v(0);
      for (std::size_t k = 0; k < node.signature.size(); ++k) {
        check_index(static_cast<int>(k));
        v += Scalar(node.signature[k]) * (x_[2 * k] * x_[2 * k] + x_[2 * k + 1] * x_[2 * k + 1]);
      }
      Jet j = zero_jet(C(v));
      for (std::size_t k = 0; k < node.signature.size(); ++k) {
        const Scalar s(node.signature[k]);
        for (std::size_t r = 2 * k; r < 2 * k + 2; ++r) {
          if (order_ >= 1) j.grad[r] = C(2 * s * x_[r]);
          if (order_ >= 2) j.hess(r, r) = C(2 * s);
        }
      }
      return j;
    }
    case Kind::Sum: {
      Jet j = zero_jet(C(0));
      for (std::size_t i = 0; i < node.children.size(); ++i) {
        const C w(Scalar(node.weights[i].real()), Scalar(node.weights[i].imag()));
        const Jet& c = eval(node.children[i]);
        j.value += w * c.value;
        if (order_ >= 1) j.grad += w * c.grad;
        if (order_ >= 2) j.hess += w * c.hess;
      }
      return j;
    }
    case Kind::Product: {
      Jet j = eval(node.children.front());
      for (std::size_t i = 1; i < node.children.size(); ++i) {
        const Jet& c = eval(node.children[i]);
        if (order_ >= 2) {
          const MatrixX<C> cross = j.grad * c.grad.transpose();
          j.hess = j.value * c.hess + c.value * j.hess + cross + cross.transpose();
        }
        if (order_ >= 1) j.grad = j.value * c.grad + c.value * j.grad;
        j.value *= c.value;
      }
      return j;
    }
    case Kind::Power: {
      const Jet& c = eval(node.children.front());
      const double p = node.exponent;
      C f0, f1, f2;
      if (is_integer(p)) {
        const auto e = static_cast<long long>(p);
        if (e < 0 && c.value == C(0)) throw DivisionByZero("negative power of zero in " + describe(node));
        f0 = ipow(c.value, e);
        f1 = e == 0 ? C(0) : Scalar(e) * ipow(c.value, e - 1);
        f2 = (e == 0 || e == 1) ? C(0) : Scalar(e) * Scalar(e - 1) * ipow(c.value, e - 2);
      } else {
        if (c.value == C(0)) throw DivisionByZero("fractional power of zero in " + describe(node));
        const Scalar ps(p);
        f0 = std::pow(c.value, ps);
        f1 = ps * f0 / c.value;
        f2 = (ps - Scalar(1)) * f1 / c.value;
      }
      Jet j = zero_jet(f0);
      if (order_ >= 1) j.grad = f1 * c.grad;
      if (order_ >= 2) j.hess = f1 * c.hess + f2 * (c.grad * c.grad.transpose());
      return j;
    }
    case Kind::Quotient: {
      const Jet& num = eval(node.children[0]);
      const Jet& den = eval(node.children[1]);
      if (den.value == C(0)) throw DivisionByZero("denominator vanishes in " + describe(node));
      const C q = num.value / den.value;
      Jet j = zero_jet(q);
      if (order_ >= 1) j.grad = (num.grad - q * den.grad) / den.value;
      if (order_ >= 2) {
        const MatrixX<C> cross = j.grad * den.grad.transpose();
        j.hess = (num.hess - q * den.hess - cross - cross.transpose()) / den.value;
      }
      return j;
    }
    }
    throw Error("unknown node kind");
  }

  static std::string describe(const Node& node);

  const VectorX<Scalar>& x_;
  int order_;
  Eigen::Index dim_;
  std::unordered_map<const Node*, Jet> cache_;
};

void print(std::ostream& os, const Node& node) {
  switch (node.kind) {
  case Kind::Constant:
    os << "(" << node.constant.real() << (node.constant.imag() < 0 ? "" : "+") << node.constant.imag()
       << "i)";
    break;
  case Kind::Coord:
    os << "z" << node.index + 1;
    break;
  case Kind::ConjCoord:
    os << "conj(z" << node.index + 1 << ")";
    break;
  case Kind::Quadratic: {
    bool indefinite = false;
    for (int s : node.signature) indefinite |= s < 0;
    os << (indefinite ? "<<z,z>>" : "<z,z>");
    break;
  }
  case Kind::Sum:
    os << "(";
    for (std::size_t i = 0; i < node.children.size(); ++i) {
      if (i) os << " + ";
      if (node.weights[i] != Cx(1)) os << "(" << node.weights[i].real() << "," << node.weights[i].imag() << ")*";
      print(os, *node.children[i]);
    }
    os << ")";
    break;
  case Kind::Product:
    for (std::size_t i = 0; i < node.children.size(); ++i) {
      if (i) os << "*";
      print(os, *node.children[i]);
    }
    break;
  case Kind::Power:
    os << "(";
    print(os, *node.children[0]);
    os << ")^" << node.exponent;
    break;
  case Kind::Quotient:
    os << "(";
    print(os, *node.children[0]);
    os << ")/(";
    print(os, *node.children[1]);
    os << ")";
    break;
  }
}

template <typename Scalar>
std::string Evaluator<Scalar>::describe(const Node& node) {
  std::ostringstream os;
  print(os, node);
  std::string s = os.str();
  if (s.size() > 120) s = s.substr(0, 117) + "...";
  return s;
}

NodePtr conj_node(const NodePtr& node, std::unordered_map<const Node*, NodePtr>& memo) {
  if (auto it = memo.find(node.get()); it != memo.end()) return it->second;
  Node copy = *node;
  switch (node->kind) {
  case Kind::Coord:
    copy.kind = Kind::ConjCoord;
    break;
  case Kind::ConjCoord:
    copy.kind = Kind::Coord;
    break;
  case Kind::Constant:
    copy.constant = std::conj(node->constant);
    break;
  case Kind::Sum:
    for (auto& w : copy.weights) w = std::conj(w);
    break;
  default:
    break;
  }
  for (auto& child : copy.children) child = conj_node(child, memo);
  NodePtr out = make_node(std::move(copy));
  memo.emplace(node.get(), out);
  return out;
}

} // namespace

ScalarField::ScalarField() : node_(make_node(Node{})) {}

ScalarField ScalarField::coord(int k) {
  Node n;
  n.kind = Kind::Coord;
  n.index = k;
  return ScalarField(make_node(std::move(n)));
}

ScalarField ScalarField::conj_coord(int k) {
  Node n;
  n.kind = Kind::ConjCoord;
  n.index = k;
  return ScalarField(make_node(std::move(n)));
}

ScalarField ScalarField::constant(Cx c) {
  Node n;
  n.constant = c;
  return ScalarField(make_node(std::move(n)));
}

ScalarField ScalarField::quadratic(std::vector<int> signature) {
  Node n;
  n.kind = Kind::Quadratic;
  n.signature = std::move(signature);
  return ScalarField(make_node(std::move(n)));
}

ScalarField linear_combination(const std::vector<Cx>& coefficients,
                               const std::vector<ScalarField>& terms) {
  if (coefficients.size() != terms.size()) {
    throw DimensionMismatch("linear_combination: coefficient/term count differs");
  }
  Node n;
  n.kind = Kind::Sum;
  n.weights = coefficients;
  for (const auto& t : terms) n.children.push_back(t.node_);
  return ScalarField(make_node(std::move(n)));
}

ScalarField product(const std::vector<ScalarField>& factors) {
  if (factors.empty()) return ScalarField::constant(1.0);
  if (factors.size() == 1) return factors.front();
  Node n;
  n.kind = Kind::Product;
  for (const auto& f : factors) n.children.push_back(f.node_);
  return ScalarField(make_node(std::move(n)));
}

ScalarField operator+(const ScalarField& a, const ScalarField& b) {
  return linear_combination({1.0, 1.0}, {a, b});
}

ScalarField operator-(const ScalarField& a, const ScalarField& b) {
  return linear_combination({1.0, -1.0}, {a, b});
}

ScalarField operator-(const ScalarField& a) { return linear_combination({-1.0}, {a}); }

ScalarField operator*(const ScalarField& a, const ScalarField& b) { return product({a, b}); }

ScalarField operator*(Cx c, const ScalarField& a) { return linear_combination({c}, {a}); }

ScalarField operator/(const ScalarField& a, const ScalarField& b) {
  Node n;
  n.kind = Kind::Quotient;
  n.children = {a.node_, b.node_};
  return ScalarField(make_node(std::move(n)));
}

ScalarField pow(const ScalarField& base, double exponent) {
  if (exponent == 1.0) return base;
  Node n;
  n.kind = Kind::Power;
  n.exponent = exponent;
  n.children = {base.node_};
  return ScalarField(make_node(std::move(n)));
}

ScalarField conj(const ScalarField& f) {
  std::unordered_map<const Node*, NodePtr> memo;
  return ScalarField(conj_node(f.node_, memo));
}

int ScalarField::max_coordinate() const {
  int best = -1;
  std::vector<const Node*> stack{node_.get()};
  while (!stack.empty()) {
    const Node* n = stack.back();
    stack.pop_back();
    if (n->kind == Kind::Coord || n->kind == Kind::ConjCoord) best = std::max(best, n->index);
    if (n->kind == Kind::Quadratic) best = std::max(best, static_cast<int>(n->signature.size()) - 1);
    for (const auto& c : n->children) stack.push_back(c.get());
  }
  return best;
}

std::string ScalarField::to_string() const {
  std::ostringstream os;
  print(os, *node_);
  return os.str();
}

template <typename Scalar>
std::complex<Scalar> ScalarField::value(const VectorX<Scalar>& x) const {
  Evaluator<Scalar> ev(x, 0);
  return ev.eval(node_).value;
}

template <typename Scalar>
Jet2<Scalar> ScalarField::jet(const VectorX<Scalar>& x, int order) const {
  Evaluator<Scalar> ev(x, order);
  return ev.eval(node_);
}

template std::complex<double> ScalarField::value<double>(const VectorX<double>&) const;
template std::complex<long double> ScalarField::value<long double>(const VectorX<long double>&) const;
template Jet2<double> ScalarField::jet<double>(const VectorX<double>&, int) const;
template Jet2<long double> ScalarField::jet<long double>(const VectorX<long double>&, int) const;

WirtingerView wirtinger_view(const Jet2d& jet, int m) {
  if (jet.grad.size() != 2 * m) {
    throw DimensionMismatch("wirtinger_view: jet has " + std::to_string(jet.grad.size()) +
                            " real directions, expected " + std::to_string(2 * m));
  }
  const Cx i(0.0, 1.0);
  WirtingerView w;
  w.dz.resize(m);
  w.dzbar.resize(m);
  for (int k = 0; k < m; ++k) {
    w.dz[k] = 0.5 * (jet.grad[2 * k] - i * jet.grad[2 * k + 1]);
    w.dzbar[k] = 0.5 * (jet.grad[2 * k] + i * jet.grad[2 * k + 1]);
  }
  if (jet.hess.size() > 0) {
    w.dzdzbar.resize(m, m);
    const auto& h = jet.hess;
    for (int a = 0; a < m; ++a) {
      for (int b = 0; b < m; ++b) {
        // (d_xa - i d_ya)(d_xb + i d_yb) / 4
        w.dzdzbar(a, b) = 0.25 * (h(2 * a, 2 * b) + i * h(2 * a, 2 * b + 1) - i * h(2 * a + 1, 2 * b) +
                                  h(2 * a + 1, 2 * b + 1));
      }
    }
  }
  return w;
}

} // namespace harmomorph
