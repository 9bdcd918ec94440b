#ifndef ANSEC_CONIC_HPP
#define ANSEC_CONIC_HPP

#include <Eigen/Dense>

#include <complex>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace ansec {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using Index = Eigen::Index;

/// Cartesian product of cones, in the fixed order
/// nonnegative orthant, second-order cones, PSD cones (svec storage).
struct ConeDims {
    Index nonneg = 0;
    std::vector<Index> soc;
    std::vector<Index> psd;  // matrix sides

    Index dim() const;     // total length of a cone-space vector
    Index degree() const;  // barrier degree: nonneg + #soc + sum(psd sides)
};

/// Cone program in the form
///   minimize    c'x
///   subject to  A x = b,   h - G x  in  K,
/// where K is the product cone described by `cones` and the rows of G/h
/// are laid out segment by segment (nonneg rows, then each SOC block,
/// then each PSD block in svec form).
struct ConicProblem {
    Vec c;
    Mat A;  // p x n (p may be 0)
    Vec b;
    Mat G;  // m x n, m == cones.dim()
    Vec h;
    ConeDims cones;

    // Optional names mapping cone segments to model quantities, in segment
    // order (nonneg rows individually, then one name per SOC/PSD block).
    std::vector<std::string> segment_names;

    Index num_vars() const { return c.size(); }
    void validate() const;  // throws std::invalid_argument on malformed data
};

enum class SolveStatus {
    optimal,
    infeasible,
    unbounded,
    max_iterations,
    numerical_failure,
};

const char* to_string(SolveStatus s);

struct ConicSolution {
    Vec x;  // primal
    Vec y;  // equality duals
    Vec z;  // cone duals (same layout as G rows)
    Vec s;  // primal slacks, s = h - Gx at optimum
    SolveStatus status = SolveStatus::numerical_failure;
    double primal_obj = 0.0;
    double dual_obj = 0.0;
    double gap = 0.0;      // relative duality gap
    double feas = 0.0;     // max of primal/dual residual norms
    int iterations = 0;
};

struct SolverOptions {
    double tol_gap = 1e-8;
    double tol_res = 1e-8;
    int max_iter = 200;
    int refine = 1;  // iterative refinement steps per KKT solve
};

/// Abstract solver interface so an external conic solver can be swapped in
/// behind the same contract.
class ConicSolver {
public:
    virtual ~ConicSolver() = default;
    virtual ConicSolution solve(const ConicProblem& p) = 0;
};

/// Dense primal-dual path-following interior-point solver with
/// Nesterov-Todd scaling and a self-dual embedding for infeasibility
/// detection. Adequate for the small dense instances this library builds.
class InteriorPointSolver final : public ConicSolver {
public:
    explicit InteriorPointSolver(SolverOptions opts = {}) : opts_(opts) {}
    ConicSolution solve(const ConicProblem& p) override;

private:
    SolverOptions opts_;
};

ConicSolution solve(const ConicProblem& p, double tol_gap = 1e-8,
                    double tol_res = 1e-8, int max_iter = 200);

// ---- complex Hermitian <-> real symmetric lowering ----

/// [[Re H, -Im H], [Im H, Re H]]; each eigenvalue of H appears twice.
Mat embed_hermitian(const CMat& h, double tol = 1e-10);

/// Inverse of embed_hermitian; the input must carry the embedding block
/// symmetry to `tol` (relative), otherwise a std::runtime_error is thrown.
CMat extract_hermitian(const Mat& m, double tol = 1e-7);

// ---- symmetric vectorization (lower triangle, off-diagonal * sqrt(2)) ----

Index svec_dim(Index side);
Vec svec(const Mat& s);
Mat smat(const Vec& v);

/// Self-describing text dump (segment table + dense coefficient blocks)
/// for offline cross-validation against an external solver.
void dump_problem(const ConicProblem& p, std::ostream& os);

}  // namespace ansec

#endif
