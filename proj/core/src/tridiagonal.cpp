#include "drivebrake/tridiagonal.hpp"

#include <stdexcept>

namespace drivebrake {

Grid1D::Grid1D(double L_, int N_, double T_end_, long M_) : L(L_), N(N_), T_end(T_end_), M(M_)
{
    if (!(L > 0)) throw std::invalid_argument("grid.L must be positive");
    if (N < 2) throw std::invalid_argument("grid.N must be >= 2");
    if (!(T_end > 0)) throw std::invalid_argument("grid.T must be positive");
    if (M < 1) throw std::invalid_argument("grid.M must be >= 1");
}

std::vector<double> TridiagonalMatrix::apply(std::span<const double> x) const
{
    const std::size_t n = size();
    if (x.size() != n) throw std::invalid_argument("size mismatch");
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = diag[i] * x[i];
        if (i > 0) s += lower[i] * x[i - 1];
        if (i + 1 < n) s += upper[i] * x[i + 1];
        y[i] = s;
    }
    return y;
}

TridiagonalMatrix neumann_laplacian(std::size_t nodes)
{
    if (nodes < 2) throw std::invalid_argument("need at least two nodes");
    TridiagonalMatrix A{std::vector<double>(nodes, 1.0), std::vector<double>(nodes, -2.0),
                        std::vector<double>(nodes, 1.0)};
    A.lower[0] = 0.0;
    A.upper[nodes - 1] = 0.0;
    A.diag[0] += 1.0;
    A.diag[nodes - 1] += 1.0;
    return A;
}

ThomasSolver::ThomasSolver(const TridiagonalMatrix& m) : lower_(m.lower), upper_(m.upper), inv_pivot_(m.size())
{
    const std::size_t n = m.size();
    if (n == 0) throw std::invalid_argument("empty matrix");
    // upper_ becomes the modified super-diagonal c'_i = c_i / pivot_i.
    double pivot = m.diag[0];
    for (std::size_t i = 0;; ++i) {
        if (pivot == 0.0) throw std::runtime_error("zero pivot in tridiagonal factorization");
        inv_pivot_[i] = 1.0 / pivot;
        if (i + 1 == n) break;
        upper_[i] = m.upper[i] * inv_pivot_[i];
        pivot = m.diag[i + 1] - m.lower[i + 1] * upper_[i];
    }
}

void ThomasSolver::solve(std::span<const double> rhs, std::span<double> out) const
{
    const std::size_t n = size();
    if (rhs.size() != n || out.size() != n) throw std::invalid_argument("size mismatch");
    out[0] = rhs[0] * inv_pivot_[0];
    for (std::size_t i = 1; i < n; ++i) out[i] = (rhs[i] - lower_[i] * out[i - 1]) * inv_pivot_[i];
    for (std::size_t i = n - 1; i-- > 0;) out[i] -= upper_[i] * out[i + 1];
}

DiffusionOperator build_diffusion_operator(const Grid1D& g)
{
    const std::size_t n = g.nodes();
    TridiagonalMatrix A = neumann_laplacian(n);
    const double r = g.dt() / (g.dx() * g.dx());
    TridiagonalMatrix B{std::vector<double>(n), std::vector<double>(n), std::vector<double>(n)};
    for (std::size_t i = 0; i < n; ++i) {
        B.lower[i] = -r * A.lower[i];
        B.diag[i] = 1.0 - r * A.diag[i];
        B.upper[i] = -r * A.upper[i];
    }
    ThomasSolver solver(B);
    return {std::move(A), std::move(B), std::move(solver)};
}

}  // namespace drivebrake
