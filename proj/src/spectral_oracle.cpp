#include "dwave/spectral_oracle.hpp"

#include <cmath>

#include "dwave/fourier.hpp"
#include "dwave/lapack.hpp"

namespace dwave {

ModeOperator assemble_mode(int k, const SurfaceProfile& m,
                           const DampingProfile& a, int n) {
  if (n < 4 || n % 2)
    throw std::invalid_argument("assemble_mode: need even n >= 4");
  ModeOperator op;
  op.k = k;
  op.n = n;
  op.z.resize(n);
  auto d2 = spectral_minus_d2_matrix(n);
  op.l_sym = Eigen::Map<Eigen::MatrixXd>(d2.data(), n, n);
  op.a_diag.resize(n);
  op.r_weight.resize(n);
  for (int j = 0; j < n; ++j) {
    double z = two_pi * j / n;
    op.z[j] = z;
    auto ev = m.eval(z);
    op.l_sym(j, j) += static_cast<double>(k) * k * ev.W +
                      subpotential_from_w(ev.W, ev.dW, ev.d2W);
    op.a_diag(j) = a.a(z);
    op.r_weight(j) = ev.R;
  }
  return op;
}

ComplexBox default_window(int k) {
  return {k - 2.0, k + 2.0, -0.1, 1.1};
}

namespace {

// parity sectors of the symmetric grid j <-> n - j
struct ParityBasis {
  // columns of P embed sector coordinates into the full grid
  std::vector<int> rep;        // representative index per sector coordinate
  std::vector<double> weight;  // 1 or 1/sqrt(2)
  int parity;                  // +1 or -1

  Eigen::VectorXd embed(const Eigen::VectorXd& c, int n) const {
    Eigen::VectorXd full = Eigen::VectorXd::Zero(n);
    for (std::size_t i = 0; i < rep.size(); ++i) {
      int j = rep[i];
      if (j == 0 || 2 * j == n) {
        full(j) = c(i);
      } else {
        full(j) = weight[i] * c(i);
        full(n - j) = parity * weight[i] * c(i);
      }
    }
    return full;
  }
};

ParityBasis make_parity(int n, int parity) {
  ParityBasis pb;
  pb.parity = parity;
  if (parity > 0) {
    pb.rep.push_back(0);
    pb.weight.push_back(1.0);
  }
  for (int j = 1; j < n / 2; ++j) {
    pb.rep.push_back(j);
    pb.weight.push_back(std::sqrt(0.5));
  }
  if (parity > 0) {
    pb.rep.push_back(n / 2);
    pb.weight.push_back(1.0);
  }
  return pb;
}

}  // namespace

std::vector<OracleEigenpair> qep_spectrum(const ModeOperator& op,
                                          const ComplexBox& window,
                                          double residual_tol) {
  std::vector<OracleEigenpair> out;
  const int n = op.n;
  const double kd = std::max(1.0, static_cast<double>(op.k));

  for (int parity : {+1, -1}) {
    ParityBasis pb = make_parity(n, parity);
    const int m = static_cast<int>(pb.rep.size());
    // P^T L P using the two-nonzero structure of the parity columns
    Eigen::MatrixXd ls(m, m);
    {
      const double rt = std::sqrt(0.5);
      Eigen::MatrixXd lp(n, m);
      for (int c = 0; c < m; ++c) {
        int jc = pb.rep[c];
        if (jc == 0 || 2 * jc == n)
          lp.col(c) = op.l_sym.col(jc);
        else
          lp.col(c) = rt * (op.l_sym.col(jc) + parity * op.l_sym.col(n - jc));
      }
      for (int i = 0; i < m; ++i) {
        int ji = pb.rep[i];
        if (ji == 0 || 2 * ji == n)
          ls.row(i) = lp.row(ji);
        else
          ls.row(i) = rt * (lp.row(ji) + parity * lp.row(n - ji));
      }
    }
    Eigen::VectorXd as(m);
    for (int c = 0; c < m; ++c) as(c) = op.a_diag(pb.rep[c]);

    // companion for s~ = i tau / k:  [[-A/k, -L/k^2], [I, 0]]
    Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(2 * m, 2 * m);
    comp.topLeftCorner(m, m).diagonal() = -as / kd;
    comp.topRightCorner(m, m) = -ls / (kd * kd);
    comp.bottomLeftCorner(m, m).setIdentity();

    RealEig eig = eig_dense(comp);
    for (int i = 0; i < 2 * m; ++i) {
      cplx stilde = eig.values[i];
      cplx tau = cplx(0.0, -1.0) * stilde * kd;  // tau = -i s
      if (!window.contains(tau)) continue;
      Eigen::VectorXcd psi_s = eig.vectors.col(i).tail(m);
      Eigen::VectorXd re = psi_s.real(), im = psi_s.imag();
      Eigen::VectorXcd psi =
          pb.embed(re, n).cast<cplx>() + cplx(0, 1) * pb.embed(im, n).cast<cplx>();
      Eigen::VectorXd pr = psi.real(), pim = psi.imag();
      Eigen::VectorXcd lpsi = (op.l_sym * pr).cast<cplx>() +
                              cplx(0, 1) * (op.l_sym * pim).cast<cplx>();
      Eigen::VectorXcd res = lpsi - tau * tau * psi +
                             cplx(0, 1) * tau *
                                 op.a_diag.cast<cplx>().cwiseProduct(psi);
      // relative to the |tau|^2 scale of the pencil at the eigenvalue
      double rr = res.norm() / (std::norm(tau) * psi.norm());
      OracleEigenpair pair;
      pair.tau = tau;
      pair.psi = psi / psi.norm();
      pair.residual = rr;
      pair.parity = parity;
      if (rr <= residual_tol) out.push_back(std::move(pair));
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.tau.real() < b.tau.real();
  });
  return out;
}

MatchResult match_quasimode(const QuasiEigenvalue& pred,
                            const std::vector<OracleEigenpair>& spec) {
  if (spec.empty())
    throw std::runtime_error("match_quasimode: empty spectrum window");
  MatchResult mr;
  double best = 1e300;
  for (std::size_t i = 0; i < spec.size(); ++i) {
    double d = std::abs(spec[i].tau - pred.tau);
    if (d < best) {
      best = d;
      mr.index = static_cast<int>(i);
    }
  }
  mr.distance = best;
  mr.nearest = spec[mr.index].tau;
  return mr;
}

double weighted_symmetry_defect(const ModeOperator& op, std::uint64_t seed) {
  // original-variable operator: L_k = R^{-1/2} l_sym R^{1/2}; check
  // <L u, v>_R = <u, L v>_R on random vectors
  const int n = op.n;
  Eigen::VectorXd rh = op.r_weight.cwiseSqrt();
  auto lk = [&](const Eigen::VectorXd& u) {
    Eigen::VectorXd w = rh.cwiseProduct(u);
    Eigen::VectorXd lw = op.l_sym * w;
    return lw.cwiseQuotient(rh).eval();
  };
  double worst = 0.0;
  for (int trial = 0; trial < 5; ++trial) {
    auto uu = random_uniform(seed + trial, n, -1.0, 1.0);
    auto vv = random_uniform(seed + 100 + trial, n, -1.0, 1.0);
    Eigen::VectorXd u = Eigen::Map<Eigen::VectorXd>(uu.data(), n);
    Eigen::VectorXd v = Eigen::Map<Eigen::VectorXd>(vv.data(), n);
    Eigen::VectorXd lu = lk(u), lv = lk(v);
    double lhs = (lu.cwiseProduct(v).cwiseProduct(op.r_weight)).sum();
    double rhs = (u.cwiseProduct(lv).cwiseProduct(op.r_weight)).sum();
    double scale = lu.norm() * v.norm() + u.norm() * lv.norm();
    worst = std::max(worst, std::abs(lhs - rhs) / scale);
  }
  return worst;
}

}  // namespace dwave
