#include "fboal/network.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <stdexcept>

namespace fboal {

std::size_t NetworkParams::layer_offset(int l) const {
  std::size_t off = 0;
  for (int i = 0; i < l; ++i)
    off += static_cast<std::size_t>(layer_sizes[i + 1]) *
               (layer_sizes[i] + 1);
  return off;
}

NetworkParams init_network(const std::vector<int> &layer_sizes,
                           std::uint64_t seed) {
  if (layer_sizes.size() < 2)
    throw std::invalid_argument("init_network: need at least two layers");
  for (int n : layer_sizes)
    if (n <= 0)
      throw std::invalid_argument("init_network: layer sizes must be positive");

  NetworkParams p;
  p.layer_sizes = layer_sizes;
  std::size_t total = 0;
  for (std::size_t l = 0; l + 1 < layer_sizes.size(); ++l)
    total += static_cast<std::size_t>(layer_sizes[l + 1]) *
             (layer_sizes[l] + 1);
  p.flat.assign(total, 0.0);

  std::mt19937_64 rng(seed);
  for (int l = 0; l + 1 < static_cast<int>(layer_sizes.size()); ++l) {
    const int fan_in = layer_sizes[l];
    const int fan_out = layer_sizes[l + 1];
    const double bound = std::sqrt(6.0 / (fan_in + fan_out));
    std::uniform_real_distribution<double> dist(-bound, bound);
    for (int r = 0; r < fan_out; ++r)
      for (int c = 0; c < fan_in; ++c)
        p.flat[p.weight_index(l, r, c)] = dist(rng);
    // biases stay zero
  }
  return p;
}

void NetworkParams::save(const std::string &path) const {
  std::ofstream out(path);
  if (!out)
    throw std::runtime_error("cannot open " + path + " for writing");
  out.precision(17);
  out << "fboal-net v1\n";
  out << layer_sizes.size();
  for (int n : layer_sizes)
    out << ' ' << n;
  out << '\n';
  for (std::size_t i = 0; i < flat.size(); ++i)
    out << flat[i] << (i + 1 == flat.size() ? '\n' : ' ');
}

NetworkParams NetworkParams::load(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot open " + path);
  std::string tag, version;
  in >> tag >> version;
  if (tag != "fboal-net" || version != "v1")
    throw std::runtime_error(path + ": not a fboal-net v1 snapshot");
  std::size_t n;
  in >> n;
  NetworkParams p;
  p.layer_sizes.resize(n);
  for (auto &s : p.layer_sizes)
    in >> s;
  std::size_t total = 0;
  for (std::size_t l = 0; l + 1 < p.layer_sizes.size(); ++l)
    total += static_cast<std::size_t>(p.layer_sizes[l + 1]) *
             (p.layer_sizes[l] + 1);
  p.flat.resize(total);
  for (auto &v : p.flat)
    in >> v;
  if (!in)
    throw std::runtime_error(path + ": truncated snapshot");
  return p;
}

Dual2<double> directional_derivs(const NetworkParams &params,
                                 std::span<const double> point,
                                 int direction_index) {
  if (direction_index < 0 ||
      direction_index >= static_cast<int>(point.size()))
    throw std::out_of_range("directional_derivs: direction index");
  std::vector<Dual2<double>> in;
  in.reserve(point.size());
  for (std::size_t i = 0; i < point.size(); ++i)
    in.push_back(lift_input(point[i],
                            static_cast<int>(i) == direction_index ? 1.0
                                                                   : 0.0));
  return forward<Dual2<double>>(params, in);
}

} // namespace fboal
