#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "ctan/num/tensor.hpp"

namespace ctan::num {

class Tape;

/// Lightweight handle to a node on a tape.
struct Value {
  Tape* tape = nullptr;
  std::int32_t id = -1;
  bool valid() const { return tape != nullptr && id >= 0; }
};

/// Define-by-run reverse-mode tape. Records every primitive as it is
/// evaluated; backward() accumulates adjoints in reverse order. The tape is
/// rebuilt per forward pass, there is no graph caching.
///
/// Supported primitives: matmul, add, sub, mul, scale, tanh, concat, slice,
/// sum, softmax over a set, sigmoid, log.
class Tape {
 public:
  enum class Op : std::uint8_t {
    Leaf,
    Const,
    MatMul,
    Add,
    Sub,
    Mul,
    Scale,
    Tanh,
    Concat,
    Slice,
    Sum,
    SoftmaxSet,
    Sigmoid,
    Log,
  };

  struct Node {
    Op op;
    bool needs_grad = false;
    std::vector<std::int32_t> in;
    double c = 0.0;        // scale factor
    std::int64_t i0 = 0;   // slice start
    std::int64_t i1 = 0;   // slice length
    Tensor val;
  };

  /// Differentiable leaf (a parameter). The tensor is copied onto the tape.
  Value leaf(const Tensor& t) {
    return push(Node{Op::Leaf, true, {}, 0.0, 0, 0, t});
  }

  /// Non-differentiable input.
  Value constant(const Tensor& t) {
    return push(Node{Op::Const, false, {}, 0.0, 0, 0, t});
  }

  Value constant_scalar(double v) { return constant(Tensor::scalar(v)); }

  const Tensor& value(Value v) const { return node(v).val; }

  std::size_t size() const { return nodes_.size(); }

  const Node& node(Value v) const {
    check_handle(v);
    return nodes_[static_cast<std::size_t>(v.id)];
  }

  /// Overwrite a leaf's tensor in place (same shape). Used when re-running
  /// a recorded computation against perturbed parameters.
  void set_leaf(Value v, const Tensor& t) {
    Node& n = nodes_[static_cast<std::size_t>(v.id)];
    if (n.op != Op::Leaf && n.op != Op::Const)
      throw ContractError("tape: set_leaf on non-leaf");
    if (!n.val.same_shape(t)) throw DimensionError("tape: set_leaf shape mismatch");
    n.val = t;
  }

  /// Recompute every node in recording order. With unchanged leaves this
  /// reproduces the recorded values bitwise.
  void replay() {
    for (auto& n : nodes_)
      if (n.op != Op::Leaf && n.op != Op::Const) n.val = eval(n);
  }

  /// Reverse accumulation from a scalar loss. Gradients of all
  /// grad-requiring nodes become available through grad().
  void backward(Value loss) {
    const Node& ln = node(loss);
    if (!ln.val.is_scalar())
      throw ContractError("backward: loss must be a scalar tensor");
    grads_.assign(nodes_.size(), Tensor());
    if (!ln.needs_grad) return;  // loss independent of every leaf
    grad_ref(loss.id) = Tensor::scalar(1.0);
    for (std::int32_t i = loss.id; i >= 0; --i) {
      Node& n = nodes_[static_cast<std::size_t>(i)];
      if (!n.needs_grad || grads_[static_cast<std::size_t>(i)].numel() == 0) continue;
      pull(n, grads_[static_cast<std::size_t>(i)]);
    }
  }

  /// Gradient of the last backward() with respect to node v; zeros of the
  /// node's shape if the loss did not depend on it.
  Tensor grad(Value v) const {
    check_handle(v);
    if (static_cast<std::size_t>(v.id) >= grads_.size() ||
        grads_[static_cast<std::size_t>(v.id)].numel() == 0)
      return Tensor::zeros(node(v).val.shape());
    return grads_[static_cast<std::size_t>(v.id)];
  }

 private:
  friend Value matmul(Value, Value);
  friend Value add(Value, Value);
  friend Value sub(Value, Value);
  friend Value mul(Value, Value);
  friend Value scale(Value, double);
  friend Value tanh(Value);
  friend Value sigmoid(Value);
  friend Value log(Value);
  friend Value concat(std::span<const Value>);
  friend Value slice(Value, std::int64_t, std::int64_t);
  friend Value sum(Value);
  friend Value softmax_set(Value);

  Value push(Node n) {
    if (n.op != Op::Leaf && n.op != Op::Const) n.val = eval(n);
    nodes_.push_back(std::move(n));
    return Value{this, static_cast<std::int32_t>(nodes_.size() - 1)};
  }

  void check_handle(Value v) const {
    if (v.tape != this || v.id < 0 ||
        v.id >= static_cast<std::int32_t>(nodes_.size()))
      throw ContractError("tape: foreign or invalid value handle");
  }

  const Tensor& in_val(const Node& n, std::size_t k) const {
    return nodes_[static_cast<std::size_t>(n.in[k])].val;
  }

  Tensor& grad_ref(std::int32_t id) {
    Tensor& g = grads_[static_cast<std::size_t>(id)];
    if (g.numel() == 0) g = Tensor::zeros(nodes_[static_cast<std::size_t>(id)].val.shape());
    return g;
  }

  void add_grad(std::int32_t id, const Tensor& contribution) {
    if (!nodes_[static_cast<std::size_t>(id)].needs_grad) return;
    Tensor& g = grad_ref(id);
    for (std::int64_t i = 0; i < g.numel(); ++i) g[i] += contribution[i];
  }

  // ---- forward kernels ----

  Tensor eval(const Node& n) const;

  // matmul canonicalization: rank-1 lhs acts as a 1xk row, rank-1 rhs as a
  // kx1 column; the result collapses the promoted axes again.
  struct MatView {
    std::int64_t rows, cols;
    const double* p;
  };

  static MatView as_lhs(const Tensor& t) {
    if (t.rank() == 2) return {t.rows(), t.cols(), t.data()};
    if (t.rank() == 1) return {1, t.shape()[0], t.data()};
    throw DimensionError("matmul: lhs must be rank 1 or 2, got " +
                         Tensor::shape_str(t.shape()));
  }

  static MatView as_rhs(const Tensor& t) {
    if (t.rank() == 2) return {t.rows(), t.cols(), t.data()};
    if (t.rank() == 1) return {t.shape()[0], 1, t.data()};
    throw DimensionError("matmul: rhs must be rank 1 or 2, got " +
                         Tensor::shape_str(t.shape()));
  }

  static void gemm(std::int64_t m, std::int64_t k, std::int64_t n,
                   const double* a, const double* b, double* c) {
    for (std::int64_t i = 0; i < m; ++i)
      for (std::int64_t j = 0; j < n; ++j) {
        double acc = 0.0;
        for (std::int64_t l = 0; l < k; ++l) acc += a[i * k + l] * b[l * n + j];
        c[i * n + j] = acc;
      }
  }

  // ---- backward kernels ----

  void pull(const Node& n, const Tensor& g);

  std::vector<Node> nodes_;
  std::vector<Tensor> grads_;
};

inline Tensor Tape::eval(const Node& n) const {
  switch (n.op) {
    case Op::Leaf:
    case Op::Const:
      return n.val;
    case Op::MatMul: {
      const Tensor& a = in_val(n, 0);
      const Tensor& b = in_val(n, 1);
      MatView av = as_lhs(a), bv = as_rhs(b);
      if (av.cols != bv.rows)
        throw DimensionError("matmul: inner dimensions disagree: " +
                             Tensor::shape_str(a.shape()) + " vs " +
                             Tensor::shape_str(b.shape()));
      std::vector<std::int64_t> out_shape;
      if (a.rank() == 2 && b.rank() == 2) out_shape = {av.rows, bv.cols};
      else if (a.rank() == 2) out_shape = {av.rows};
      else if (b.rank() == 2) out_shape = {bv.cols};
      Tensor out(std::move(out_shape));
      gemm(av.rows, av.cols, bv.cols, av.p, bv.p, out.data());
      return out;
    }
    case Op::Add:
    case Op::Sub:
    case Op::Mul: {
      const Tensor& a = in_val(n, 0);
      const Tensor& b = in_val(n, 1);
      const bool a_scalar = a.numel() == 1 && !b.same_shape(a);
      const bool b_scalar = b.numel() == 1 && !a.same_shape(b);
      if (!a.same_shape(b) && !a_scalar && !b_scalar)
        throw DimensionError("elementwise: incompatible shapes " +
                             Tensor::shape_str(a.shape()) + " vs " +
                             Tensor::shape_str(b.shape()));
      const Tensor& big = a_scalar ? b : a;
      Tensor out(big.shape());
      const std::int64_t m = out.numel();
      for (std::int64_t i = 0; i < m; ++i) {
        const double x = a_scalar ? a[0] : a[i];
        const double y = b_scalar ? b[0] : b[i];
        out[i] = n.op == Op::Add ? x + y : n.op == Op::Sub ? x - y : x * y;
      }
      return out;
    }
    case Op::Scale: {
      const Tensor& a = in_val(n, 0);
      Tensor out(a.shape());
      for (std::int64_t i = 0; i < a.numel(); ++i) out[i] = n.c * a[i];
      return out;
    }
    case Op::Tanh: {
      const Tensor& a = in_val(n, 0);
      Tensor out(a.shape());
      // keep outputs strictly inside (-1, 1); std::tanh rounds to +-1.0
      // for |x| > ~19
      const double top = std::nextafter(1.0, 0.0);
      for (std::int64_t i = 0; i < a.numel(); ++i)
        out[i] = std::clamp(std::tanh(a[i]), -top, top);
      return out;
    }
    case Op::Sigmoid: {
      const Tensor& a = in_val(n, 0);
      Tensor out(a.shape());
      for (std::int64_t i = 0; i < a.numel(); ++i) {
        const double x = a[i];
        if (x >= 0.0) {
          out[i] = 1.0 / (1.0 + std::exp(-x));
        } else {
          const double e = std::exp(x);
          out[i] = e / (1.0 + e);
        }
      }
      return out;
    }
    case Op::Log: {
      const Tensor& a = in_val(n, 0);
      Tensor out(a.shape());
      for (std::int64_t i = 0; i < a.numel(); ++i) {
        if (!(a[i] > 0.0)) throw NumericError("log: non-positive input");
        out[i] = std::log(a[i]);
      }
      return out;
    }
    case Op::Concat: {
      std::int64_t total = 0;
      for (std::size_t k = 0; k < n.in.size(); ++k) {
        const Tensor& t = in_val(n, k);
        if (t.rank() > 1)
          throw DimensionError("concat: inputs must be vectors or scalars");
        total += t.numel();
      }
      Tensor out({total});
      std::int64_t off = 0;
      for (std::size_t k = 0; k < n.in.size(); ++k) {
        const Tensor& t = in_val(n, k);
        for (std::int64_t i = 0; i < t.numel(); ++i) out[off++] = t[i];
      }
      return out;
    }
    case Op::Slice: {
      const Tensor& a = in_val(n, 0);
      if (a.rank() != 1) throw DimensionError("slice: input must be rank 1");
      if (n.i0 < 0 || n.i1 < 0 || n.i0 + n.i1 > a.numel())
        throw DimensionError("slice: range out of bounds");
      Tensor out({n.i1});
      for (std::int64_t i = 0; i < n.i1; ++i) out[i] = a[n.i0 + i];
      return out;
    }
    case Op::Sum: {
      const Tensor& a = in_val(n, 0);
      double acc = 0.0;
      for (std::int64_t i = 0; i < a.numel(); ++i) acc += a[i];
      return Tensor::scalar(acc);
    }
    case Op::SoftmaxSet: {
      const Tensor& a = in_val(n, 0);
      if (a.rank() != 1) throw DimensionError("softmax_set: input must be rank 1");
      if (a.numel() == 0) throw ContractError("softmax_set: empty set");
      Tensor out(a.shape());
      double mx = a[0];
      for (std::int64_t i = 1; i < a.numel(); ++i) mx = std::max(mx, a[i]);
      double z = 0.0;
      for (std::int64_t i = 0; i < a.numel(); ++i) {
        out[i] = std::exp(a[i] - mx);
        z += out[i];
      }
      for (std::int64_t i = 0; i < a.numel(); ++i) out[i] /= z;
      return out;
    }
  }
  throw ContractError("tape: unknown op");
}

inline void Tape::pull(const Node& n, const Tensor& g) {
  switch (n.op) {
    case Op::Leaf:
    case Op::Const:
      return;
    case Op::MatMul: {
      const Tensor& a = in_val(n, 0);
      const Tensor& b = in_val(n, 1);
      MatView av = as_lhs(a), bv = as_rhs(b);
      // dA = g . B^T, dB = A^T . g (in the promoted m x n view of g)
      const std::int64_t m = av.rows, k = av.cols, nn = bv.cols;
      Tensor da(a.shape());
      for (std::int64_t i = 0; i < m; ++i)
        for (std::int64_t l = 0; l < k; ++l) {
          double acc = 0.0;
          for (std::int64_t j = 0; j < nn; ++j)
            acc += g[i * nn + j] * bv.p[l * nn + j];
          da[i * k + l] = acc;
        }
      add_grad(n.in[0], da);
      Tensor db(b.shape());
      for (std::int64_t l = 0; l < k; ++l)
        for (std::int64_t j = 0; j < nn; ++j) {
          double acc = 0.0;
          for (std::int64_t i = 0; i < m; ++i)
            acc += av.p[i * k + l] * g[i * nn + j];
          db[l * nn + j] = acc;
        }
      add_grad(n.in[1], db);
      return;
    }
    case Op::Add:
    case Op::Sub: {
      const double sgn = n.op == Op::Sub ? -1.0 : 1.0;
      for (int side = 0; side < 2; ++side) {
        const Tensor& x = in_val(n, static_cast<std::size_t>(side));
        const double s = side == 0 ? 1.0 : sgn;
        Tensor dx(x.shape());
        if (x.numel() == 1 && g.numel() > 1) {
          double acc = 0.0;
          for (std::int64_t i = 0; i < g.numel(); ++i) acc += g[i];
          dx[0] = s * acc;
        } else {
          for (std::int64_t i = 0; i < g.numel(); ++i) dx[i] = s * g[i];
        }
        add_grad(n.in[static_cast<std::size_t>(side)], dx);
      }
      return;
    }
    case Op::Mul: {
      const Tensor& a = in_val(n, 0);
      const Tensor& b = in_val(n, 1);
      const bool a_scalar = a.numel() == 1 && g.numel() > 1;
      const bool b_scalar = b.numel() == 1 && g.numel() > 1;
      Tensor da(a.shape());
      if (a_scalar) {
        double acc = 0.0;
        for (std::int64_t i = 0; i < g.numel(); ++i) acc += g[i] * b[i];
        da[0] = acc;
      } else {
        for (std::int64_t i = 0; i < g.numel(); ++i)
          da[i] = g[i] * (b_scalar ? b[0] : b[i]);
      }
      add_grad(n.in[0], da);
      Tensor db(b.shape());
      if (b_scalar) {
        double acc = 0.0;
        for (std::int64_t i = 0; i < g.numel(); ++i) acc += g[i] * a[i];
        db[0] = acc;
      } else {
        for (std::int64_t i = 0; i < g.numel(); ++i)
          db[i] = g[i] * (a_scalar ? a[0] : a[i]);
      }
      add_grad(n.in[1], db);
      return;
    }
    case Op::Scale: {
      Tensor da(in_val(n, 0).shape());
      for (std::int64_t i = 0; i < g.numel(); ++i) da[i] = n.c * g[i];
      add_grad(n.in[0], da);
      return;
    }
    case Op::Tanh: {
      Tensor da(n.val.shape());
      for (std::int64_t i = 0; i < g.numel(); ++i)
        da[i] = g[i] * (1.0 - n.val[i] * n.val[i]);
      add_grad(n.in[0], da);
      return;
    }
    case Op::Sigmoid: {
      Tensor da(n.val.shape());
      for (std::int64_t i = 0; i < g.numel(); ++i)
        da[i] = g[i] * n.val[i] * (1.0 - n.val[i]);
      add_grad(n.in[0], da);
      return;
    }
    case Op::Log: {
      const Tensor& a = in_val(n, 0);
      Tensor da(a.shape());
      for (std::int64_t i = 0; i < g.numel(); ++i) da[i] = g[i] / a[i];
      add_grad(n.in[0], da);
      return;
    }
    case Op::Concat: {
      std::int64_t off = 0;
      for (std::size_t k = 0; k < n.in.size(); ++k) {
        const Tensor& t = in_val(n, k);
        Tensor dt(t.shape());
        for (std::int64_t i = 0; i < t.numel(); ++i) dt[i] = g[off + i];
        off += t.numel();
        add_grad(n.in[k], dt);
      }
      return;
    }
    case Op::Slice: {
      const Tensor& a = in_val(n, 0);
      Tensor da(a.shape());
      for (std::int64_t i = 0; i < n.i1; ++i) da[n.i0 + i] = g[i];
      add_grad(n.in[0], da);
      return;
    }
    case Op::Sum: {
      const Tensor& a = in_val(n, 0);
      Tensor da(a.shape());
      for (std::int64_t i = 0; i < a.numel(); ++i) da[i] = g[0];
      add_grad(n.in[0], da);
      return;
    }
    case Op::SoftmaxSet: {
      const Tensor& p = n.val;
      double dot = 0.0;
      for (std::int64_t i = 0; i < p.numel(); ++i) dot += g[i] * p[i];
      Tensor da(p.shape());
      for (std::int64_t i = 0; i < p.numel(); ++i) da[i] = p[i] * (g[i] - dot);
      add_grad(n.in[0], da);
      return;
    }
  }
}

namespace detail {
inline Tape* same_tape(Value a, Value b) {
  if (a.tape == nullptr || a.tape != b.tape)
    throw ContractError("op: operands live on different tapes");
  return a.tape;
}
inline bool any_grad(Tape& t, std::initializer_list<Value> vs) {
  for (Value v : vs)
    if (t.node(v).needs_grad) return true;
  return false;
}
}  // namespace detail

inline Value matmul(Value a, Value b) {
  Tape* t = detail::same_tape(a, b);
  return t->push({Tape::Op::MatMul, detail::any_grad(*t, {a, b}), {a.id, b.id}});
}
inline Value add(Value a, Value b) {
  Tape* t = detail::same_tape(a, b);
  return t->push({Tape::Op::Add, detail::any_grad(*t, {a, b}), {a.id, b.id}});
}
inline Value sub(Value a, Value b) {
  Tape* t = detail::same_tape(a, b);
  return t->push({Tape::Op::Sub, detail::any_grad(*t, {a, b}), {a.id, b.id}});
}
inline Value mul(Value a, Value b) {
  Tape* t = detail::same_tape(a, b);
  return t->push({Tape::Op::Mul, detail::any_grad(*t, {a, b}), {a.id, b.id}});
}
inline Value scale(Value a, double c) {
  return a.tape->push({Tape::Op::Scale, a.tape->node(a).needs_grad, {a.id}, c});
}
inline Value tanh(Value a) {
  return a.tape->push({Tape::Op::Tanh, a.tape->node(a).needs_grad, {a.id}});
}
inline Value sigmoid(Value a) {
  return a.tape->push({Tape::Op::Sigmoid, a.tape->node(a).needs_grad, {a.id}});
}
inline Value log(Value a) {
  return a.tape->push({Tape::Op::Log, a.tape->node(a).needs_grad, {a.id}});
}
inline Value concat(std::span<const Value> vs) {
  if (vs.empty()) throw ContractError("concat: empty input list");
  Tape* t = vs[0].tape;
  Tape::Node n{Tape::Op::Concat, false, {}};
  for (Value v : vs) {
    detail::same_tape(vs[0], v);
    n.needs_grad = n.needs_grad || t->node(v).needs_grad;
    n.in.push_back(v.id);
  }
  return t->push(std::move(n));
}
inline Value concat(std::initializer_list<Value> vs) {
  return concat(std::span<const Value>(vs.begin(), vs.size()));
}
inline Value slice(Value a, std::int64_t start, std::int64_t len) {
  return a.tape->push(
      {Tape::Op::Slice, a.tape->node(a).needs_grad, {a.id}, 0.0, start, len});
}
inline Value sum(Value a) {
  return a.tape->push({Tape::Op::Sum, a.tape->node(a).needs_grad, {a.id}});
}
inline Value softmax_set(Value a) {
  return a.tape->push({Tape::Op::SoftmaxSet, a.tape->node(a).needs_grad, {a.id}});
}

inline Value negate(Value a) { return scale(a, -1.0); }
inline Value dot(Value a, Value b) { return sum(mul(a, b)); }

/// log(sigmoid(x)) composed from primitives; 1 - sigmoid(x) is evaluated as
/// sigmoid(-x) so no catastrophic cancellation occurs on either tail.
inline Value log_sigmoid(Value x) { return log(sigmoid(x)); }

/// Binary cross-entropy from a logit and a hard 0/1 label.
inline Value bce_with_logit(Value logit, double label01) {
  Value pos = log_sigmoid(logit);
  Value neg = log_sigmoid(negate(logit));
  return negate(add(scale(pos, label01), scale(neg, 1.0 - label01)));
}

}  // namespace ctan::num
