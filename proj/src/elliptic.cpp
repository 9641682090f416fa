#include "slns/elliptic.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>
#include <cmath>
#include <string>

#include "slns/simd/kernels.hpp"

namespace slns {

std::string_view to_string(PoissonBackend b) {
  return b == PoissonBackend::Direct ? "direct" : "cg";
}

PoissonBackend parse_poisson_backend(std::string_view name) {
  if (name == "direct") return PoissonBackend::Direct;
  if (name == "cg") return PoissonBackend::ConjugateGradient;
  throw std::invalid_argument("unknown poisson backend '" + std::string(name) +
                              "' (expected direct or cg)");
}

PoissonBc default_poisson_bc(const Grid& g) {
  return g.fully_periodic() ? PoissonBc::Periodic : PoissonBc::DirichletZero;
}

PoissonOperator::PoissonOperator(GridPtr grid, PoissonBc bc) : grid_(std::move(grid)), bc_(bc) {
  const Grid& g = *grid_;
  if (bc_ == PoissonBc::Periodic && !g.fully_periodic())
    throw std::invalid_argument("periodic Poisson problem needs both axes periodic");
  if (bc_ == PoissonBc::DirichletZero && g.fully_periodic())
    throw std::invalid_argument("Dirichlet Poisson problem needs at least one wall");

  const std::size_t nx = g.nx(), ny = g.ny(), n = g.size();
  c_.assign(n, 0.0);
  w_.assign(n, 0.0);
  e_.assign(n, 0.0);
  s_.assign(n, 0.0);
  n_.assign(n, 0.0);
  mass_.assign(n, 0.0);
  active_.assign(n, 0);

  for (std::size_t j = 0; j < ny; ++j) {
    for (std::size_t i = 0; i < nx; ++i) {
      if (g.on_wall(i, j)) continue;
      const std::size_t k = g.index(i, j);
      const double hxl = g.x().spacing(g.x().neighbor(i, -1));
      const double hxr = g.x().spacing(i);
      const double hyl = g.y().spacing(g.y().neighbor(j, -1));
      const double hyr = g.y().spacing(j);
      const double mx = 0.5 * (hxl + hxr);
      const double my = 0.5 * (hyl + hyr);
      w_[k] = -my / hxl;
      e_[k] = -my / hxr;
      s_[k] = -mx / hyl;
      n_[k] = -mx / hyr;
      c_[k] = -(w_[k] + e_[k] + s_[k] + n_[k]);
      mass_[k] = mx * my;
      active_[k] = 1;
    }
  }
}

double PoissonOperator::coupling(std::size_t k, int dir) const {
  switch (dir) {
    case 0:
      return w_[k];
    case 1:
      return e_[k];
    case 2:
      return s_[k];
    default:
      return n_[k];
  }
}

void PoissonOperator::apply_stiffness(const double* x, double* out) const {
  const Grid& g = *grid_;
  const std::size_t nx = g.nx(), ny = g.ny();
  const bool px = g.x().periodic(), py = g.y().periodic();
  const auto& k = simd::kernels();

  auto point = [&](std::size_t idx, std::size_t west, std::size_t east, std::size_t south,
                   std::size_t north) {
    out[idx] = c_[idx] * x[idx] + w_[idx] * x[west] + e_[idx] * x[east] + s_[idx] * x[south] +
               n_[idx] * x[north];
  };

  for (std::size_t j = 0; j < ny; ++j) {
    const std::size_t row = j * nx;
    if (!py && (j == 0 || j + 1 == ny)) {
      std::fill(out + row, out + row + nx, 0.0);
      continue;
    }
    const std::size_t south = g.y().neighbor(j, -1) * nx;
    const std::size_t north = g.y().neighbor(j, +1) * nx;
    const std::size_t k0 = row + 1;
    k.stencil5({c_.data() + k0, w_.data() + k0, e_.data() + k0, s_.data() + k0, n_.data() + k0,
                x + k0, x + south + 1, x + north + 1, out + k0, nx - 2});
    if (px) {
      point(row, row + nx - 1, row + 1, south, north);
      point(row + nx - 1, row + nx - 2, row, south + nx - 1, north + nx - 1);
    } else {
      out[row] = 0.0;
      out[row + nx - 1] = 0.0;
    }
  }
}

ScalarField PoissonOperator::apply(const ScalarField& psi) const {
  ScalarField out(psi.grid_ptr());
  apply_stiffness(psi.data(), out.data());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = active_[k] ? out[k] / mass_[k] : 0.0;
  return out;
}

PoissonOperator assemble_poisson(GridPtr grid, PoissonBc bc) {
  return PoissonOperator(std::move(grid), bc);
}

// ---------------------------------------------------------------------------

struct PoissonSolver::Factorization {
  std::vector<long> unknown;  // node -> unknown index, -1 if fixed
  std::vector<std::size_t> node;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
};

PoissonSolver::PoissonSolver(PoissonOperator op, PoissonBackend backend, double tol,
                             int max_iterations)
    : op_(std::move(op)), backend_(backend), tol_(tol), max_iterations_(max_iterations) {
  if (!(tol_ > 0.0)) throw std::invalid_argument("Poisson tolerance must be positive");
  if (backend_ != PoissonBackend::Direct) return;

  const Grid& g = op_.grid();
  const std::size_t n = g.size();
  factor_ = std::make_unique<Factorization>();
  factor_->unknown.assign(n, -1);
  for (std::size_t k = 0; k < n; ++k) {
    // The periodic problem pins node 0 to remove the constant nullspace.
    if (!op_.active(k) || (op_.bc() == PoissonBc::Periodic && k == 0)) continue;
    factor_->unknown[k] = static_cast<long>(factor_->node.size());
    factor_->node.push_back(k);
  }

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(factor_->node.size() * 5);
  const std::size_t nx = g.nx();
  for (std::size_t r = 0; r < factor_->node.size(); ++r) {
    const std::size_t k = factor_->node[r];
    const std::size_t i = k % nx, j = k / nx;
    const std::size_t nb[4] = {g.index(g.x().neighbor(i, -1), j), g.index(g.x().neighbor(i, 1), j),
                               g.index(i, g.y().neighbor(j, -1)), g.index(i, g.y().neighbor(j, 1))};
    triplets.emplace_back(r, r, op_.diagonal()[k]);
    for (int d = 0; d < 4; ++d) {
      const long col = factor_->unknown[nb[d]];
      if (col >= 0) triplets.emplace_back(r, col, op_.coupling(k, d));
    }
  }
  Eigen::SparseMatrix<double> K(static_cast<long>(factor_->node.size()),
                                static_cast<long>(factor_->node.size()));
  K.setFromTriplets(triplets.begin(), triplets.end());
  factor_->ldlt.compute(K);
  if (factor_->ldlt.info() != Eigen::Success)
    throw std::runtime_error("sparse factorization of the Poisson operator failed");
}

PoissonSolver::~PoissonSolver() = default;
PoissonSolver::PoissonSolver(PoissonSolver&&) noexcept = default;
PoissonSolver& PoissonSolver::operator=(PoissonSolver&&) noexcept = default;

std::vector<double> PoissonSolver::prepare_rhs(const ScalarField& omega,
                                               ScalarField& projected) const {
  const std::size_t n = omega.size();
  const auto mass = op_.mass();
  projected = omega;
  if (op_.bc() == PoissonBc::Periodic) {
    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      num += mass[k] * omega[k];
      den += mass[k];
    }
    const double mean = num / den;
    for (std::size_t k = 0; k < n; ++k) projected[k] -= mean;
  }
  std::vector<double> rhs(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    if (!op_.active(k)) projected[k] = 0.0;
    rhs[k] = mass[k] * projected[k];
  }
  return rhs;
}

double PoissonSolver::relative_residual(const ScalarField& psi, const ScalarField& omega) const {
  const ScalarField a = op_.apply(psi);
  double rr = 0.0, bb = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (!op_.active(k)) continue;
    const double d = a[k] - omega[k];
    rr += d * d;
    bb += omega[k] * omega[k];
  }
  return bb > 0.0 ? std::sqrt(rr / bb) : std::sqrt(rr);
}

void PoissonSolver::solve_cg(const std::vector<double>& rhs, std::vector<double>& x) {
  const auto& kt = simd::kernels();
  const std::size_t n = rhs.size();
  const auto mass = op_.mass();
  const auto diag = op_.diagonal();
  std::vector<double> inv_diag(n, 0.0), inv_mass(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    if (!op_.active(k)) {
      x[k] = 0.0;
      continue;
    }
    inv_diag[k] = 1.0 / diag[k];
    inv_mass[k] = 1.0 / mass[k];
  }

  // Stop on the residual of A psi = omega, i.e. on M^{-1} r.
  std::vector<double> tmp(n);
  auto a_residual_norm2 = [&](const std::vector<double>& r) {
    kt.hadamard(r.data(), inv_mass.data(), tmp.data(), n);
    return kt.dot(tmp.data(), tmp.data(), n);
  };
  kt.hadamard(rhs.data(), inv_mass.data(), tmp.data(), n);
  const double omega_norm2 = kt.dot(tmp.data(), tmp.data(), n);
  const double target = tol_ * tol_ * omega_norm2;

  std::vector<double> r(n), z(n), p(n), ap(n);
  op_.apply_stiffness(x.data(), ap.data());
  kt.lincomb(1.0, rhs.data(), -1.0, ap.data(), r.data(), n);
  kt.hadamard(r.data(), inv_diag.data(), z.data(), n);
  p = z;
  double rz = kt.dot(r.data(), z.data(), n);

  report_.iterations = 0;
  double res2 = a_residual_norm2(r);
  while (res2 > target) {
    if (report_.iterations >= max_iterations_) {
      const double rel = std::sqrt(res2 / omega_norm2);
      throw PoissonSolveError("conjugate gradient hit the iteration cap with relative residual " +
                                  std::to_string(rel),
                              rel);
    }
    op_.apply_stiffness(p.data(), ap.data());
    const double pap = kt.dot(p.data(), ap.data(), n);
    if (!(pap > 0.0)) break;
    const double alpha = rz / pap;
    kt.axpy(alpha, p.data(), x.data(), n);
    kt.axpy(-alpha, ap.data(), r.data(), n);
    kt.hadamard(r.data(), inv_diag.data(), z.data(), n);
    const double rz_new = kt.dot(r.data(), z.data(), n);
    kt.xpay(z.data(), rz_new / rz, p.data(), n);
    rz = rz_new;
    ++report_.iterations;
    res2 = a_residual_norm2(r);
  }
}

void PoissonSolver::solve_direct(const std::vector<double>& rhs, std::vector<double>& x) {
  const auto& f = *factor_;
  Eigen::VectorXd b(static_cast<long>(f.node.size()));
  for (std::size_t r = 0; r < f.node.size(); ++r) b[static_cast<long>(r)] = rhs[f.node[r]];
  const Eigen::VectorXd sol = f.ldlt.solve(b);
  std::fill(x.begin(), x.end(), 0.0);
  for (std::size_t r = 0; r < f.node.size(); ++r) x[f.node[r]] = sol[static_cast<long>(r)];
  report_.iterations = 0;
}

ScalarField PoissonSolver::solve(const ScalarField& omega, const ScalarField* guess) {
  if (!(omega.grid() == op_.grid())) throw std::invalid_argument("vorticity grid mismatch");
  ScalarField projected;
  const std::vector<double> rhs = prepare_rhs(omega, projected);

  std::vector<double> x(rhs.size(), 0.0);
  if (backend_ == PoissonBackend::Direct) {
    solve_direct(rhs, x);
  } else {
    if (guess != nullptr) std::copy(guess->values().begin(), guess->values().end(), x.begin());
    solve_cg(rhs, x);
  }

  ScalarField psi(omega.grid_ptr(), std::move(x));
  if (op_.bc() == PoissonBc::Periodic) {
    double mean = 0.0;
    for (double v : psi.values()) mean += v;
    mean /= static_cast<double>(psi.size());
    for (double& v : psi.values()) v -= mean;
  }
  report_.relative_residual = relative_residual(psi, projected);
  if (!psi.all_finite() || report_.relative_residual > tol_) {
    throw PoissonSolveError("Poisson solve missed tolerance: relative residual " +
                                std::to_string(report_.relative_residual),
                            report_.relative_residual);
  }
  return psi;
}

ScalarField solve_poisson(const PoissonOperator& A, const ScalarField& omega, double tol) {
  PoissonSolver solver(A, PoissonBackend::ConjugateGradient, tol);
  return solver.solve(omega);
}

VectorField velocity_from_streamfunction(const ScalarField& psi,
                                         const std::vector<WallSpec>& walls) {
  const Grid& g = psi.grid();
  validate_walls(walls, g);
  const std::size_t nx = g.nx(), ny = g.ny();
  VectorField vel(psi.grid_ptr());

  Vec2 wall_velocity[4] = {};
  for (const auto& w : walls) wall_velocity[static_cast<int>(w.side)] = w.velocity();

  for (std::size_t j = 0; j < ny; ++j) {
    for (std::size_t i = 0; i < nx; ++i) {
      if (g.on_wall(i, j)) {
        Vec2 sum{};
        int count = 0;
        auto add = [&](Side s) {
          sum = sum + wall_velocity[static_cast<int>(s)];
          ++count;
        };
        if (!g.x().periodic() && i == 0) add(Side::Left);
        if (!g.x().periodic() && i + 1 == nx) add(Side::Right);
        if (!g.y().periodic() && j == 0) add(Side::Bottom);
        if (!g.y().periodic() && j + 1 == ny) add(Side::Top);
        vel.u(i, j) = sum.x / count;
        vel.v(i, j) = sum.y / count;
        continue;
      }
      const std::size_t im = g.x().neighbor(i, -1), ip = g.x().neighbor(i, 1);
      const std::size_t jm = g.y().neighbor(j, -1), jp = g.y().neighbor(j, 1);
      const double dx = g.x().spacing(im) + g.x().spacing(i);
      const double dy = g.y().spacing(jm) + g.y().spacing(j);
      vel.u(i, j) = (psi(i, jp) - psi(i, jm)) / dy;
      vel.v(i, j) = -(psi(ip, j) - psi(im, j)) / dx;
    }
  }
  return vel;
}

}  // namespace slns
