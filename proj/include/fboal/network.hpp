#pragma once

#include "fboal/dual.hpp"
#include "fboal/tape.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace fboal {

// Fully-connected feed-forward network with tanh hidden layers and a
// linear output layer.  Weights and biases are stored in one flat vector,
// per layer: W (row-major, fan_out x fan_in) followed by b.
struct NetworkParams {
  std::vector<int> layer_sizes;
  std::vector<double> flat;

  int n_layers() const { return static_cast<int>(layer_sizes.size()) - 1; }
  std::size_t n_params() const { return flat.size(); }

  std::size_t layer_offset(int l) const;
  std::size_t weight_index(int l, int row, int col) const {
    return layer_offset(l) +
           static_cast<std::size_t>(row) * layer_sizes[l] + col;
  }
  std::size_t bias_index(int l, int row) const {
    return layer_offset(l) +
           static_cast<std::size_t>(layer_sizes[l + 1]) * layer_sizes[l] + row;
  }

  double weight(int l, int row, int col) const {
    return flat[weight_index(l, row, col)];
  }
  double bias(int l, int row) const { return flat[bias_index(l, row)]; }

  void save(const std::string &path) const;
  static NetworkParams load(const std::string &path);
};

// Glorot-uniform weights, zero biases; bit-reproducible for a given seed.
NetworkParams init_network(const std::vector<int> &layer_sizes,
                           std::uint64_t seed);

// Forward pass generic over the activation scalar (double, Dual2<double>,
// Var, Dual2<Var>) and over how parameters are read: `param_at(flat_index)`
// returns either a double or a tape Var.
template <typename S, typename ParamAt>
S forward_mlp(const std::vector<int> &sizes, ParamAt &&param_at,
              std::span<const S> input) {
  using std::tanh;
  const NetworkParams shape{sizes, {}};
  std::vector<S> act(input.begin(), input.end());
  std::vector<S> next;
  const int L = static_cast<int>(sizes.size()) - 1;
  for (int l = 0; l < L; ++l) {
    next.assign(sizes[l + 1], S{});
    for (int r = 0; r < sizes[l + 1]; ++r) {
      S acc = S{} + param_at(shape.bias_index(l, r));
      for (int c = 0; c < sizes[l]; ++c)
        acc += param_at(shape.weight_index(l, r, c)) * act[c];
      next[r] = l + 1 < L ? tanh(acc) : acc;
    }
    act.swap(next);
  }
  return act[0];
}

template <typename S>
S forward(const NetworkParams &params, std::span<const S> input) {
  return forward_mlp<S>(params.layer_sizes,
                        [&](std::size_t i) { return params.flat[i]; }, input);
}

enum class TransformKind { identity, burgers_hard };

// burgers_hard pins the initial and boundary conditions of the Burgers
// problem into the output: u = t(x-1)(x+1) raw - sin(pi x).
template <typename S>
S apply_transform(TransformKind kind, const S &raw, const S &x,
                  const S &time) {
  using std::sin;
  if (kind == TransformKind::identity)
    return raw;
  constexpr double pi = 3.14159265358979323846;
  return time * (x - 1.0) * (x + 1.0) * raw - sin(pi * x);
}

// Value and first/second derivative of the network output along one input
// coordinate, via a single second-order forward pass.
Dual2<double> directional_derivs(const NetworkParams &params,
                                 std::span<const double> point,
                                 int direction_index);

} // namespace fboal
