#include "fboal/batch.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace fboal {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Points are processed in fixed-size blocks.  The three derivative streams
// (value, d/dxi, d2/dxi2) pass through the same linear maps, so each block
// keeps one [width x 3 * kLanes] matrix per layer: columns 0..kLanes-1 hold
// values, the next kLanes first derivatives, the last kLanes second
// derivatives.  Layer propagation is then a single matrix product.  Tail
// blocks pad unused lanes with zeros and zero adjoint seeds.
constexpr int kLanes = 128;
constexpr int kCols = 3 * kLanes;

using Mat = Eigen::MatrixXd;
using WMap = Eigen::Map<
    const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;
using BMap = Eigen::Map<const Eigen::VectorXd>;

struct BlockTrace {
  std::vector<Mat> act; // post-activation streams per layer 0..L
  std::vector<Mat> zg, zh; // hidden pre-activation g/h streams

  void resize(const std::vector<int> &sizes) {
    const int L = static_cast<int>(sizes.size()) - 1;
    act.resize(L + 1);
    zg.resize(L);
    zh.resize(L);
    for (int l = 0; l <= L; ++l)
      act[l].setZero(sizes[l], kCols);
    for (int l = 0; l < L; ++l) {
      zg[l].setZero(sizes[l + 1], kLanes);
      zh[l].setZero(sizes[l + 1], kLanes);
    }
  }
};

// direction: 0 seeds d/dx, 1 seeds d/dt.
void set_inputs(BlockTrace &tr, const ProblemSpec &spec,
                const Point *const *pts, int n, int direction) {
  Mat &in = tr.act[0];
  in.setZero();
  for (int b = 0; b < n; ++b) {
    in(0, b) = pts[b]->x;
    in(1, b) = pts[b]->t;
    if (spec.parameterized())
      in(2, b) = spec.normalize_param(spec.point_param(*pts[b]));
  }
  in.row(direction).segment(kLanes, kLanes).setOnes();
}

// flat must be 64-byte aligned so vector kernels split identically from
// run to run; a std::vector's allocation alignment is not reproducible.
void forward_block(const double *flat, const std::vector<int> &sizes,
                   const std::vector<std::size_t> &offs, BlockTrace &tr) {
  const int L = static_cast<int>(sizes.size()) - 1;
  for (int l = 0; l < L; ++l) {
    const int nin = sizes[l];
    const int nout = sizes[l + 1];
    const WMap W(flat + offs[l], nout, nin);
    const BMap bias(flat + offs[l] + static_cast<std::size_t>(nout) * nin,
                    nout);
    Mat &z = tr.act[l + 1];
    z.noalias() = W * tr.act[l];
    z.leftCols(kLanes).colwise() += bias;
    if (l + 1 < L) {
      tr.zg[l] = z.middleCols(kLanes, kLanes);
      tr.zh[l] = z.rightCols(kLanes);
      auto a = z.leftCols(kLanes).array();
      a = a.tanh();
      const auto t1 = 1.0 - a.square();
      z.middleCols(kLanes, kLanes).array() = t1 * tr.zg[l].array();
      z.rightCols(kLanes).array() =
          t1 * tr.zh[l].array() -
          2.0 * a * t1 * tr.zg[l].array().square();
    }
  }
}

struct BackBuffers {
  Mat bar;  // activation adjoints, current layer
  Mat zbar; // pre-activation adjoints
  Mat below;
};

// seed: [1 x kCols] adjoint of the raw network output streams.
void backward_block(const double *flat, const std::vector<int> &sizes,
                    const std::vector<std::size_t> &offs,
                    const BlockTrace &tr, const Mat &seed, double *grad,
                    BackBuffers &bb) {
  const int L = static_cast<int>(sizes.size()) - 1;
  bb.bar = seed;
  for (int l = L - 1; l >= 0; --l) {
    const int nin = sizes[l];
    const int nout = sizes[l + 1];
    if (l == L - 1) {
      bb.zbar = bb.bar;
    } else {
      const auto a = tr.act[l + 1].leftCols(kLanes).array();
      const auto zg = tr.zg[l].array();
      const auto zh = tr.zh[l].array();
      const auto t1 = 1.0 - a.square();
      const auto t2 = -2.0 * a * t1;
      const auto t3 = t1 * (6.0 * a.square() - 2.0);
      const auto bv = bb.bar.leftCols(kLanes).array();
      const auto bg = bb.bar.middleCols(kLanes, kLanes).array();
      const auto bh = bb.bar.rightCols(kLanes).array();
      bb.zbar.resize(nout, kCols);
      bb.zbar.leftCols(kLanes).array() =
          bv * t1 + bg * t2 * zg + bh * (t2 * zh + t3 * zg.square());
      bb.zbar.middleCols(kLanes, kLanes).array() =
          bg * t1 + bh * 2.0 * t2 * zg;
      bb.zbar.rightCols(kLanes).array() = bh * t1;
    }
    const WMap W(flat + offs[l], nout, nin);
    Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                             Eigen::RowMajor>>
        gW(grad + offs[l], nout, nin);
    Eigen::Map<Eigen::VectorXd> gb(
        grad + offs[l] + static_cast<std::size_t>(nout) * nin, nout);
    gW.noalias() += bb.zbar * tr.act[l].transpose();
    gb.noalias() += bb.zbar.leftCols(kLanes).rowwise().sum();
    if (l > 0) {
      bb.below.noalias() = W.transpose() * bb.zbar;
      bb.bar.swap(bb.below);
    }
  }
}

// Coefficients of the output transform seen as an affine map of the raw
// network output N: u = q N + s, with the derivatives of q and s along
// each coordinate precomputed.
struct TransformCoef {
  double q, qx, qxx, qt; // q_tt = 0 for both in-scope transforms
  double s, sx, sxx;     // s is t-independent
};

TransformCoef transform_coef(TransformKind kind, double x, double t) {
  if (kind == TransformKind::identity)
    return {1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0};
  return {t * (x - 1.0) * (x + 1.0), 2.0 * t * x,       2.0 * t,
          (x - 1.0) * (x + 1.0),     -std::sin(kPi * x), -kPi * std::cos(kPi * x),
          kPi * kPi * std::sin(kPi * x)};
}

struct Streams {
  double v = 0.0, g = 0.0, h = 0.0;
};

struct ResidualEval {
  double r = 0.0;
  // d r / d (N value, N_x, N_xx) for the x pass and (N_t, N_tt) for the t
  // pass; the value adjoint is assigned entirely to the x pass.
  Streams seed_x, seed_t;
};

ResidualEval residual_streams(const ProblemSpec &spec, const TransformCoef &tc,
                              double pde_param, const Streams &sx,
                              const Streams &st) {
  ResidualEval out;
  const double N = sx.v;
  const double u = tc.q * N + tc.s;
  const double u_x = tc.qx * N + tc.q * sx.g + tc.sx;
  const double u_xx = tc.qxx * N + 2.0 * tc.qx * sx.g + tc.q * sx.h + tc.sxx;
  const double u_t = tc.qt * N + tc.q * st.g;
  if (spec.kind == ProblemSpec::Kind::burgers) {
    out.r = u_t + u * u_x - pde_param * u_xx;
    const double du = u_x;
    const double dux = u;
    const double duxx = -pde_param;
    out.seed_x.v = du * tc.q + dux * tc.qx + duxx * tc.qxx + tc.qt;
    out.seed_x.g = dux * tc.q + duxx * 2.0 * tc.qx;
    out.seed_x.h = duxx * tc.q;
    out.seed_t.g = tc.q;
  } else {
    const double u_tt = 2.0 * tc.qt * st.g + tc.q * st.h;
    out.r = u_tt - pde_param * u_xx;
    out.seed_x.v = -pde_param * tc.qxx;
    out.seed_x.g = -pde_param * 2.0 * tc.qx;
    out.seed_x.h = -pde_param * tc.q;
    out.seed_t.g = 2.0 * tc.qt;
    out.seed_t.h = tc.q;
  }
  return out;
}

Streams lane_streams(const BlockTrace &tr, int L, int b) {
  const Mat &o = tr.act[L];
  return {o(0, b), o(0, kLanes + b), o(0, 2 * kLanes + b)};
}

enum class TaskKind { pde, ic, bc };

struct Block {
  TaskKind kind;
  const Point *pts[kLanes];
  int n = 0;
};

} // namespace

BatchEvaluator::BatchEvaluator(ProblemSpec spec, std::vector<int> layer_sizes,
                               int n_threads)
    : spec_(std::move(spec)), sizes_(std::move(layer_sizes)),
      n_threads_(std::max(1, n_threads)) {
  layer_offsets_.resize(sizes_.size() - 1);
  std::size_t off = 0;
  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
    layer_offsets_[l] = off;
    off += static_cast<std::size_t>(sizes_[l + 1]) * (sizes_[l] + 1);
  }
}

LossBreakdown BatchEvaluator::loss_and_grad(const NetworkParams &params,
                                            const std::vector<Point> &colloc,
                                            const std::vector<Point> &ic,
                                            const std::vector<Point> &bc,
                                            std::vector<double> &grad) const {
  std::vector<Block> blocks;
  auto chunk_up = [&blocks](const std::vector<Point> &pts, TaskKind kind) {
    for (std::size_t i = 0; i < pts.size(); i += kLanes) {
      Block blk;
      blk.kind = kind;
      blk.n = static_cast<int>(std::min<std::size_t>(kLanes, pts.size() - i));
      for (int b = 0; b < blk.n; ++b)
        blk.pts[b] = &pts[i + b];
      blocks.push_back(blk);
    }
  };
  chunk_up(colloc, TaskKind::pde);
  if (spec_.w_ic != 0.0)
    chunk_up(ic, TaskKind::ic);
  if (spec_.w_bc != 0.0)
    chunk_up(bc, TaskKind::bc);

  const double n_pde =
      static_cast<double>(std::max<std::size_t>(1, colloc.size()));
  const double n_ic = static_cast<double>(std::max<std::size_t>(1, ic.size()));
  const double n_bc = static_cast<double>(std::max<std::size_t>(1, bc.size()));

  const std::size_t P = params.n_params();
  const Eigen::VectorXd flat =
      Eigen::Map<const Eigen::VectorXd>(params.flat.data(), P);
  std::vector<Eigen::VectorXd> block_grad(blocks.size());
  std::vector<LossBreakdown> block_loss(blocks.size());

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    BlockTrace tx, tt;
    tx.resize(sizes_);
    tt.resize(sizes_);
    BackBuffers bb;
    Mat seed_x(1, kCols), seed_t(1, kCols);
    const int L = static_cast<int>(sizes_.size()) - 1;
    for (;;) {
      const std::size_t ci = next.fetch_add(1);
      if (ci >= blocks.size())
        break;
      const Block &blk = blocks[ci];
      Eigen::VectorXd &g = block_grad[ci];
      g.setZero(static_cast<Eigen::Index>(P));
      LossBreakdown &loss = block_loss[ci];
      switch (blk.kind) {
      case TaskKind::pde: {
        set_inputs(tx, spec_, blk.pts, blk.n, 0);
        set_inputs(tt, spec_, blk.pts, blk.n, 1);
        forward_block(flat.data(), sizes_, layer_offsets_, tx);
        forward_block(flat.data(), sizes_, layer_offsets_, tt);
        seed_x.setZero();
        seed_t.setZero();
        for (int b = 0; b < blk.n; ++b) {
          const Point &pt = *blk.pts[b];
          const double pp = spec_.point_param(pt);
          const TransformCoef tc = transform_coef(spec_.transform, pt.x, pt.t);
          const ResidualEval re = residual_streams(spec_, tc, pp,
                                                   lane_streams(tx, L, b),
                                                   lane_streams(tt, L, b));
          loss.pde += re.r * re.r / n_pde;
          const double rbar = 2.0 * re.r / n_pde;
          seed_x(0, b) = rbar * re.seed_x.v;
          seed_x(0, kLanes + b) = rbar * re.seed_x.g;
          seed_x(0, 2 * kLanes + b) = rbar * re.seed_x.h;
          seed_t(0, b) = rbar * re.seed_t.v;
          seed_t(0, kLanes + b) = rbar * re.seed_t.g;
          seed_t(0, 2 * kLanes + b) = rbar * re.seed_t.h;
        }
        backward_block(flat.data(), sizes_, layer_offsets_, tx, seed_x,
                       g.data(), bb);
        backward_block(flat.data(), sizes_, layer_offsets_, tt, seed_t,
                       g.data(), bb);
        break;
      }
      case TaskKind::ic: {
        set_inputs(tt, spec_, blk.pts, blk.n, 1);
        forward_block(flat.data(), sizes_, layer_offsets_, tt);
        seed_t.setZero();
        for (int b = 0; b < blk.n; ++b) {
          const Point &pt = *blk.pts[b];
          const TransformCoef tc =
              transform_coef(spec_.transform, pt.x, spec_.t_min);
          const Streams st = lane_streams(tt, L, b);
          const double u = tc.q * st.v + tc.s;
          const double u_t = tc.qt * st.v + tc.q * st.g;
          const double target =
              spec_.kind == ProblemSpec::Kind::wave
                  ? wave_initial(pt.x, spec_.half_width())
                  : -std::sin(kPi * pt.x);
          const double dev = u - target;
          double term = dev * dev;
          seed_t(0, b) = 2.0 * dev * tc.q * spec_.w_ic / n_ic;
          if (spec_.kind == ProblemSpec::Kind::wave) {
            term += u_t * u_t;
            seed_t(0, b) += 2.0 * u_t * tc.qt * spec_.w_ic / n_ic;
            seed_t(0, kLanes + b) = 2.0 * u_t * tc.q * spec_.w_ic / n_ic;
          }
          loss.ic += term * spec_.w_ic / n_ic;
        }
        backward_block(flat.data(), sizes_, layer_offsets_, tt, seed_t,
                       g.data(), bb);
        break;
      }
      case TaskKind::bc: {
        set_inputs(tt, spec_, blk.pts, blk.n, 1);
        forward_block(flat.data(), sizes_, layer_offsets_, tt);
        seed_t.setZero();
        for (int b = 0; b < blk.n; ++b) {
          const Point &pt = *blk.pts[b];
          const TransformCoef tc = transform_coef(spec_.transform, pt.x, pt.t);
          const Streams st = lane_streams(tt, L, b);
          const double u = tc.q * st.v + tc.s;
          loss.bc += u * u * spec_.w_bc / n_bc;
          seed_t(0, b) = 2.0 * u * tc.q * spec_.w_bc / n_bc;
        }
        backward_block(flat.data(), sizes_, layer_offsets_, tt, seed_t,
                       g.data(), bb);
        break;
      }
      }
    }
  };

  const int nt = std::min<int>(n_threads_, static_cast<int>(blocks.size()));
  if (nt <= 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    threads.reserve(nt);
    for (int i = 0; i < nt; ++i)
      threads.emplace_back(worker);
    for (auto &th : threads)
      th.join();
  }

  grad.assign(P, 0.0);
  LossBreakdown total;
  for (std::size_t ci = 0; ci < blocks.size(); ++ci) {
    total.pde += block_loss[ci].pde;
    total.ic += block_loss[ci].ic;
    total.bc += block_loss[ci].bc;
    const Eigen::VectorXd &g = block_grad[ci];
    for (std::size_t j = 0; j < P; ++j)
      grad[j] += g[static_cast<Eigen::Index>(j)];
  }
  total.total = total.pde + total.ic + total.bc;
  return total;
}

LossBreakdown BatchEvaluator::loss(const NetworkParams &params,
                                   const std::vector<Point> &colloc,
                                   const std::vector<Point> &ic,
                                   const std::vector<Point> &bc) const {
  LossBreakdown out;
  const std::vector<double> res = residuals(params, colloc);
  for (double r : res)
    out.pde += r * r / static_cast<double>(colloc.size());
  if (spec_.w_ic != 0.0 || spec_.w_bc != 0.0) {
    const auto [lic, lbc] = ic_bc_loss(params, spec_, ic, bc);
    out.ic = lic;
    out.bc = lbc;
  }
  out.total = out.pde + out.ic + out.bc;
  return out;
}

std::vector<double>
BatchEvaluator::residuals(const NetworkParams &params,
                          const std::vector<Point> &points) const {
  std::vector<double> out(points.size());
  const Eigen::VectorXd flat = Eigen::Map<const Eigen::VectorXd>(
      params.flat.data(), static_cast<Eigen::Index>(params.n_params()));
  const std::size_t n_blocks = (points.size() + kLanes - 1) / kLanes;
  const int L = static_cast<int>(sizes_.size()) - 1;
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    BlockTrace tx, tt;
    tx.resize(sizes_);
    tt.resize(sizes_);
    for (;;) {
      const std::size_t ci = next.fetch_add(1);
      if (ci >= n_blocks)
        break;
      const std::size_t lo = ci * kLanes;
      const int n =
          static_cast<int>(std::min<std::size_t>(kLanes, points.size() - lo));
      const Point *pts[kLanes];
      for (int b = 0; b < n; ++b)
        pts[b] = &points[lo + b];
      set_inputs(tx, spec_, pts, n, 0);
      set_inputs(tt, spec_, pts, n, 1);
      forward_block(flat.data(), sizes_, layer_offsets_, tx);
      forward_block(flat.data(), sizes_, layer_offsets_, tt);
      for (int b = 0; b < n; ++b) {
        const Point &pt = points[lo + b];
        const double pp = spec_.point_param(pt);
        const TransformCoef tc = transform_coef(spec_.transform, pt.x, pt.t);
        out[lo + b] = residual_streams(spec_, tc, pp, lane_streams(tx, L, b),
                                       lane_streams(tt, L, b))
                          .r;
      }
    }
  };
  const int nt = std::min<int>(
      n_threads_, static_cast<int>(std::max<std::size_t>(1, n_blocks)));
  if (nt <= 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (int i = 0; i < nt; ++i)
      threads.emplace_back(worker);
    for (auto &th : threads)
      th.join();
  }
  return out;
}

} // namespace fboal
