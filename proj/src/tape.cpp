#include "fboal/tape.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

namespace fboal {

Var Tape::leaf(double value) {
  Node n;
  n.op = Opcode::leaf;
  n.imm = value;
  nodes_.push_back(n);
  values_.push_back(value);
  return {value, static_cast<std::int32_t>(nodes_.size() - 1), this};
}

Var Tape::record(Opcode op, double value, const Var &a, double w0) {
  assert(a.tape == this);
  if (a.idx >= static_cast<std::int32_t>(nodes_.size()))
    throw std::logic_error("tape: parent does not precede child");
  Node n;
  n.op = op;
  n.p0 = a.idx;
  n.w0 = w0;
  nodes_.push_back(n);
  values_.push_back(value);
  return {value, static_cast<std::int32_t>(nodes_.size() - 1), this};
}

Var Tape::record(Opcode op, double value, const Var &a, double w0,
                 const Var &b, double w1) {
  assert(a.tape == this && b.tape == this);
  if (a.idx >= static_cast<std::int32_t>(nodes_.size()) ||
      b.idx >= static_cast<std::int32_t>(nodes_.size()))
    throw std::logic_error("tape: parent does not precede child");
  Node n;
  n.op = op;
  n.p0 = a.idx;
  n.p1 = b.idx;
  n.w0 = w0;
  n.w1 = w1;
  nodes_.push_back(n);
  values_.push_back(value);
  return {value, static_cast<std::int32_t>(nodes_.size() - 1), this};
}

Var Tape::record_imm(Opcode op, double value, const Var &a, double w0,
                     double imm) {
  assert(a.tape == this);
  Node n;
  n.op = op;
  n.p0 = a.idx;
  n.w0 = w0;
  n.imm = imm;
  nodes_.push_back(n);
  values_.push_back(value);
  return {value, static_cast<std::int32_t>(nodes_.size() - 1), this};
}

std::vector<double> Tape::gradient(const Var &loss) const {
  if (loss.tape != this || loss.idx < 0)
    throw std::invalid_argument("gradient: loss is not recorded on this tape");
  std::vector<double> adj(nodes_.size(), 0.0);
  adj[loss.idx] = 1.0;
  for (std::int32_t i = loss.idx; i >= 0; --i) {
    const double a = adj[i];
    if (a == 0.0)
      continue;
    const Node &n = nodes_[i];
    if (n.p0 >= 0)
      adj[n.p0] += n.w0 * a;
    if (n.p1 >= 0)
      adj[n.p1] += n.w1 * a;
  }
  return adj;
}

std::vector<double> Tape::replay() const {
  std::vector<double> out(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const Node &n = nodes_[i];
    const double a = n.p0 >= 0 ? out[n.p0] : 0.0;
    const double b = n.p1 >= 0 ? out[n.p1] : 0.0;
    switch (n.op) {
    case Opcode::leaf: out[i] = n.imm; break;
    case Opcode::add: out[i] = a + b; break;
    case Opcode::sub: out[i] = a - b; break;
    case Opcode::mul: out[i] = a * b; break;
    case Opcode::div: out[i] = a / b; break;
    case Opcode::neg: out[i] = -a; break;
    case Opcode::add_c: out[i] = a + n.imm; break;
    case Opcode::sub_c: out[i] = a - n.imm; break;
    case Opcode::rsub_c: out[i] = n.imm - a; break;
    case Opcode::mul_c: out[i] = a * n.imm; break;
    case Opcode::div_c: out[i] = a / n.imm; break;
    case Opcode::rdiv_c: out[i] = n.imm / a; break;
    case Opcode::tanh_op: out[i] = std::tanh(a); break;
    case Opcode::sin_op: out[i] = std::sin(a); break;
    case Opcode::cos_op: out[i] = std::cos(a); break;
    case Opcode::sinh_op: out[i] = std::sinh(a); break;
    case Opcode::cosh_op: out[i] = std::cosh(a); break;
    case Opcode::exp_op: out[i] = std::exp(a); break;
    }
  }
  return out;
}

std::vector<double> grad(const Tape &tape, const Var &loss,
                         const std::vector<Var> &leaves) {
  const std::vector<double> adj = tape.gradient(loss);
  std::vector<double> out(leaves.size(), 0.0);
  for (std::size_t i = 0; i < leaves.size(); ++i)
    if (leaves[i].idx >= 0)
      out[i] = adj[leaves[i].idx];
  return out;
}

namespace {

inline bool on_tape(const Var &x) { return x.idx >= 0; }

inline Tape *shared_tape(const Var &a, const Var &b) {
  if (on_tape(a) && on_tape(b)) {
    assert(a.tape == b.tape);
    return a.tape;
  }
  return on_tape(a) ? a.tape : b.tape;
}

} // namespace

Var operator+(const Var &a, const Var &b) {
  Tape *t = shared_tape(a, b);
  if (!t)
    return {a.v + b.v};
  if (on_tape(a) && on_tape(b))
    return t->record(Opcode::add, a.v + b.v, a, 1.0, b, 1.0);
  const Var &rec = on_tape(a) ? a : b;
  const double c = on_tape(a) ? b.v : a.v;
  return t->record_imm(Opcode::add_c, rec.v + c, rec, 1.0, c);
}

Var operator-(const Var &a, const Var &b) {
  Tape *t = shared_tape(a, b);
  if (!t)
    return {a.v - b.v};
  if (on_tape(a) && on_tape(b))
    return t->record(Opcode::sub, a.v - b.v, a, 1.0, b, -1.0);
  if (on_tape(a))
    return t->record_imm(Opcode::sub_c, a.v - b.v, a, 1.0, b.v);
  return t->record_imm(Opcode::rsub_c, a.v - b.v, b, -1.0, a.v);
}

Var operator*(const Var &a, const Var &b) {
  Tape *t = shared_tape(a, b);
  if (!t)
    return {a.v * b.v};
  if (on_tape(a) && on_tape(b))
    return t->record(Opcode::mul, a.v * b.v, a, b.v, b, a.v);
  const Var &rec = on_tape(a) ? a : b;
  const double c = on_tape(a) ? b.v : a.v;
  return t->record_imm(Opcode::mul_c, rec.v * c, rec, c, c);
}

Var operator/(const Var &a, const Var &b) {
  Tape *t = shared_tape(a, b);
  if (!t)
    return {a.v / b.v};
  if (on_tape(a) && on_tape(b))
    return t->record(Opcode::div, a.v / b.v, a, 1.0 / b.v, b,
                     -a.v / (b.v * b.v));
  if (on_tape(a))
    return t->record_imm(Opcode::div_c, a.v / b.v, a, 1.0 / b.v, b.v);
  return t->record_imm(Opcode::rdiv_c, a.v / b.v, b, -a.v / (b.v * b.v), a.v);
}

Var operator-(const Var &a) {
  if (!on_tape(a))
    return {-a.v};
  return a.tape->record(Opcode::neg, -a.v, a, -1.0);
}

Var tanh(const Var &a) {
  const double t = std::tanh(a.v);
  if (!on_tape(a))
    return {t};
  return a.tape->record(Opcode::tanh_op, t, a, 1.0 - t * t);
}

Var sin(const Var &a) {
  if (!on_tape(a))
    return {std::sin(a.v)};
  return a.tape->record(Opcode::sin_op, std::sin(a.v), a, std::cos(a.v));
}

Var cos(const Var &a) {
  if (!on_tape(a))
    return {std::cos(a.v)};
  return a.tape->record(Opcode::cos_op, std::cos(a.v), a, -std::sin(a.v));
}

Var sinh(const Var &a) {
  if (!on_tape(a))
    return {std::sinh(a.v)};
  return a.tape->record(Opcode::sinh_op, std::sinh(a.v), a, std::cosh(a.v));
}

Var cosh(const Var &a) {
  if (!on_tape(a))
    return {std::cosh(a.v)};
  return a.tape->record(Opcode::cosh_op, std::cosh(a.v), a, std::sinh(a.v));
}

Var exp(const Var &a) {
  const double e = std::exp(a.v);
  if (!on_tape(a))
    return {e};
  return a.tape->record(Opcode::exp_op, e, a, e);
}

} // namespace fboal
