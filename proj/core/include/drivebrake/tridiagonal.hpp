#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace drivebrake {

struct Grid1D {
    double L{1280.0};
    int N{3200};  // intervals; N+1 nodes
    double T_end{300.0};
    long M{30000};  // time steps

    Grid1D() = default;
    Grid1D(double L, int N, double T_end, long M);

    double dx() const { return L / N; }
    double dt() const { return T_end / double(M); }
    std::size_t nodes() const { return std::size_t(N) + 1; }
    double x(std::size_t i) const { return double(i) * dx(); }

    static Grid1D desk() { return {1280.0, 3200, 300.0, 30000}; }
    static Grid1D full_resolution() { return {1280.0, 16000, 300.0, 160000}; }
};

// Tridiagonal matrix stored by diagonals; lower[0] and upper[n-1] are unused.
struct TridiagonalMatrix {
    std::vector<double> lower, diag, upper;

    std::size_t size() const { return diag.size(); }
    std::vector<double> apply(std::span<const double> x) const;
};

// Second-difference stencil (1,-2,1) with the first and last diagonal
// entries raised to -1, so every row sums to zero.
TridiagonalMatrix neumann_laplacian(std::size_t nodes);

// Thomas algorithm with the elimination factors computed once.
class ThomasSolver {
public:
    explicit ThomasSolver(const TridiagonalMatrix& m);
    void solve(std::span<const double> rhs, std::span<double> out) const;
    std::size_t size() const { return inv_pivot_.size(); }

private:
    std::vector<double> lower_;
    std::vector<double> upper_;
    std::vector<double> inv_pivot_;
};

struct DiffusionOperator {
    TridiagonalMatrix A;  // Neumann Laplacian stencil
    TridiagonalMatrix B;  // I - (dt/dx^2) A
    ThomasSolver solver;
};

DiffusionOperator build_diffusion_operator(const Grid1D& g);

}  // namespace drivebrake
