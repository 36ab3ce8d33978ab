#pragma once

// Closed-form sets of volume fractions that reproduce a single real
// measurement exactly, on the simplex and on the dominant-component ordered
// simplex {phi_0 >= phi_i}.

#include "mtinv/forward_model.hpp"

#include <Eigen/Core>

#include <cstddef>
#include <vector>

namespace mtinv {

/// u = p - eps_hat q. u . phi = 0 exactly when the model reproduces eps_hat.
struct UVector {
    Eigen::VectorXcd u;
    Complex eps_hat;
};

UVector build_u(const PQVectors& pq, Complex eps_hat);

/// Entries with |u_i| <= kZeroSignTolerance * max|u| count as zero.
inline constexpr double kZeroSignTolerance = 1e-9;

struct SignPartition {
    std::vector<std::size_t> positive;
    std::vector<std::size_t> negative;
    std::vector<std::size_t> zero;
};

SignPartition sign_partition(const Eigen::VectorXd& u, double rel_tol = kZeroSignTolerance);

enum class Domain { Simplex, OrderedSimplex };

/// Generators of the minimizer polytope; the set is their convex hull.
/// Generators are returned as found, without removing duplicates.
struct MinimizerSet {
    std::vector<Eigen::VectorXd> generators;
    Domain domain = Domain::Simplex;
};

/// Edge crossings t e_i + (1 - t) e_j with u_i > 0 > u_j, plus e_i for zero
/// entries. Uses Re(u). Throws EmptyMinimizerSet when u has no sign change.
MinimizerSet simplex_minimizers(const Eigen::VectorXd& u);
MinimizerSet simplex_minimizers(const UVector& u);

/// Vertex of the ordered simplex: 1/(|S|+1) on {0} u S, zero elsewhere.
struct OrderedVertex {
    std::vector<std::size_t> subset; // sorted, drawn from {1, ..., n-1}
    Eigen::VectorXd phi;
};

/// All 2^(n-1) vertices, ordered by subset size then lexicographically.
std::vector<OrderedVertex> ordered_vertices(std::size_t n);

/// Edge from vertex S to vertex S u {k}, k not in S.
struct OrderedEdge {
    std::vector<std::size_t> subset;
    std::size_t k = 0;
};

/// All (n-1) 2^(n-2) edges.
std::vector<OrderedEdge> ordered_edges(std::size_t n);

/// u^S = (u_0 + sum_{i in S} u_i) / (|S| + 1)
double vertex_value(const Eigen::VectorXd& u, const std::vector<std::size_t>& subset);

/// Crossings on every ordered-simplex edge where u^S u^{S+k} < 0, plus any
/// vertex with u^S == 0. Uses Re(u). Throws EmptyMinimizerSet if none.
MinimizerSet ordered_simplex_minimizers(const Eigen::VectorXd& u);
MinimizerSet ordered_simplex_minimizers(const UVector& u);

/// Whether phi lies in the convex hull of the generators, decided by an
/// L1-residual LP: true when the smallest residual is <= tol.
bool in_convex_hull(const MinimizerSet& set, const Eigen::VectorXd& phi, double tol = 1e-7);

} // namespace mtinv
