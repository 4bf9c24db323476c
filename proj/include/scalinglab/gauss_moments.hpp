#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "scalinglab/rng.hpp"

namespace scalinglab {

/// Symmetric covariance matrix for the moment oracles. Entries are kept
/// symmetric by construction; positive semi-definiteness is only demanded
/// (eigenvalues >= -1e-10) when the matrix is used for sampling.
class CovMatrix {
public:
    explicit CovMatrix(std::size_t dimension);
    static CovMatrix identity(std::size_t dimension);

    std::size_t dimension() const { return dim_; }
    double at(std::size_t i, std::size_t j) const { return entries_[i * dim_ + j]; }
    void set(std::size_t i, std::size_t j, double value);

private:
    std::size_t dim_;
    std::vector<double> entries_;
};

/// Index multiset for E[X_{s1} ... X_{sm}]; indices are 0-based and may
/// repeat. The multiset size is guarded at 16 (pairing count grows as m!!).
struct MomentQuery {
    std::vector<std::size_t> multiset;
};

/// Isserlis/Wick moment: sum over all pairings of covariance products;
/// exactly 0 for odd multiset size.
double isserlis_moment(const CovMatrix& cov, const MomentQuery& query);

/// Proper-pairing moment E[ prod_i (X_i^2 - R_ii) * prod_j X_j ] where i runs
/// over `squared_indices` and j over `single_indices`. The two lists are
/// disjoint as positions; index values may repeat. Pairings that match the
/// two copies contributed by one squared factor are excluded (properness).
double proper_pairing_moment(const CovMatrix& cov,
                             const std::vector<std::size_t>& squared_indices,
                             const std::vector<std::size_t>& single_indices);

/// Exponentially tilted proper moment E[ exp(X_t) * prod_i (X_i^2 - R_ii) ]
/// evaluated through the closed form
///   exp(R_tt/2) * E[ prod_i ((X_i + R_ti)^2 - R_ii) ],
/// expanded as a sum over three-way partitions (A1, A2, A3) of the squared
/// index set with |A2| even.
double exp_tilted_proper_moment(const CovMatrix& cov, std::size_t tilt_index,
                                const std::vector<std::size_t>& squared_indices);

/// Draws from N(0, cov) through a symmetric eigendecomposition; used by the
/// Monte Carlo cross-checks. Rejects covariances with eigenvalues < -1e-10.
class GaussianSampler {
public:
    explicit GaussianSampler(const CovMatrix& cov);
    std::size_t dimension() const;
    void sample(Rng& rng, double* out) const;

private:
    std::size_t dim_;
    std::vector<double> factor_;  // row-major, out = factor * g
};

}
