#pragma once

#include <cstdint>
#include <vector>

namespace fboal {

class Tape;

// Handle to a recorded scalar.  idx < 0 marks a constant that lives
// outside the tape, so plain literals mix freely with recorded values.
struct Var {
  double v = 0.0;
  std::int32_t idx = -1;
  Tape *tape = nullptr;

  Var() = default;
  Var(double c) : v(c) {}
  Var(double value, std::int32_t index, Tape *t)
      : v(value), idx(index), tape(t) {}
};

enum class Opcode : std::uint8_t {
  leaf,
  add,
  sub,
  mul,
  div,
  neg,
  add_c, // node + imm
  sub_c, // node - imm
  rsub_c, // imm - node
  mul_c, // node * imm
  div_c, // node / imm
  rdiv_c, // imm / node
  tanh_op,
  sin_op,
  cos_op,
  sinh_op,
  cosh_op,
  exp_op,
};

// Single-writer scalar tape for reverse-mode differentiation.  Nodes are
// appended in evaluation order, so parents always precede children and the
// graph is acyclic by construction.
class Tape {
public:
  struct Node {
    Opcode op;
    std::int32_t p0 = -1;
    std::int32_t p1 = -1;
    double imm = 0.0;
    double w0 = 0.0; // local partial wrt p0
    double w1 = 0.0; // local partial wrt p1
  };

  Var leaf(double value);
  Var record(Opcode op, double value, const Var &a, double w0);
  Var record(Opcode op, double value, const Var &a, double w0, const Var &b,
             double w1);
  Var record_imm(Opcode op, double value, const Var &a, double w0, double imm);

  std::size_t size() const { return nodes_.size(); }
  double value(std::int32_t idx) const { return values_[idx]; }
  const std::vector<Node> &nodes() const { return nodes_; }

  // Adjoints of `loss` with respect to every node; unreachable nodes get 0.
  std::vector<double> gradient(const Var &loss) const;

  // Recomputes every node value from its opcode and parents.  Used to
  // check that a topological replay reproduces the forward pass exactly.
  std::vector<double> replay() const;

  void clear() {
    nodes_.clear();
    values_.clear();
  }

private:
  std::vector<Node> nodes_;
  std::vector<double> values_;
};

// d(loss)/d(leaf) for a chosen set of leaves, in leaf order.
std::vector<double> grad(const Tape &tape, const Var &loss,
                         const std::vector<Var> &leaves);

Var operator+(const Var &a, const Var &b);
Var operator-(const Var &a, const Var &b);
Var operator*(const Var &a, const Var &b);
Var operator/(const Var &a, const Var &b);
Var operator-(const Var &a);
inline Var operator+(const Var &a) { return a; }

Var tanh(const Var &a);
Var sin(const Var &a);
Var cos(const Var &a);
Var sinh(const Var &a);
Var cosh(const Var &a);
Var exp(const Var &a);

inline Var &operator+=(Var &a, const Var &b) { return a = a + b; }
inline Var &operator-=(Var &a, const Var &b) { return a = a - b; }
inline Var &operator*=(Var &a, const Var &b) { return a = a * b; }
inline Var &operator/=(Var &a, const Var &b) { return a = a / b; }

} // namespace fboal
