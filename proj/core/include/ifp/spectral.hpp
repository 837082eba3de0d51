#pragma once

#include <cstddef>
#include <vector>

#include "ifp/extended_matrix.hpp"

namespace ifp {

/// Perron root of a finite nonnegative matrix.
///
/// Power iteration on m + eps*I (eps = 1e-12 * max entry) with
/// Collatz-Wielandt bounds as the stopping rule. If the bounds have not met
/// after 10,000 iterations (reducible or nearly-decoupled matrices), falls
/// back to the Gelfand formula evaluated by repeated squaring.
///
/// Throws NonFiniteEntry if any entry is +inf.
double spectral_radius(const ExtendedMatrix& m);

/// Irreducible-block form of a nonnegative matrix: strongly connected
/// components of the graph with an edge i -> j iff m(i, j) > 0, listed in an
/// order that makes the permuted matrix block upper triangular.
struct BlockDecomposition {
  std::vector<std::size_t> ordering;            ///< concatenation of blocks
  std::vector<std::vector<std::size_t>> blocks;  ///< each sorted ascending
  std::vector<double> block_radii;               ///< +inf if the block holds an inf entry
  std::vector<std::size_t> block_of;             ///< state -> block index
};

BlockDecomposition irreducible_blocks(const ExtendedMatrix& m);

/// True iff (m^k)(from, to) > 0 for some k >= 1, by graph search.
bool reachable(const ExtendedMatrix& m, std::size_t from, std::size_t to);

/// Set of states reachable from `from` by paths of length >= 1.
std::vector<bool> reachable_set(const ExtendedMatrix& m, std::size_t from);

/// A stationary distribution pi = pi P of a row-stochastic matrix by GTH
/// elimination. For reducible P, the closed classes are weighted by their
/// absorption probabilities from a uniform initial distribution.
std::vector<double> stationary_distribution(const ExtendedMatrix& p);

}  // namespace ifp
