#ifndef HILCO_COMPLEXES_HPP
#define HILCO_COMPLEXES_HPP

#include <cstdint>
#include <vector>

#include "hilco/linmap.hpp"

// Hilbert complexes over InnerProductSpaces: validation of the complex
// property, cohomology, slot-wise Hodge decomposition, Hodge Laplacians,
// duals and a seeded generator of exact random complexes.

namespace hilco {

struct ValidationReport {
    bool pass = true;
    // In finite dimensions every range is closed; reported explicitly.
    bool closed = true;
    std::vector<double> residuals;   // max-abs of a_{k+1} a_k, k = 0..N-2
    std::vector<double> scales;      // ||a_{k+1}|| * ||a_k||
    std::vector<bool> pairPass;
};

struct CohomologyReport {
    std::vector<int> dims;             // one per slot, N+1 entries
    std::vector<SubspaceBasis> bases;  // gram-orthonormal bases of K_k
};

struct HodgeParts {
    Vector exact;     // in ran(a_{k-1})
    Vector harmonic;  // in K_k
    Vector coexact;   // in ran(a_k^*)
};

// Ordered chain a_1,...,a_N over spaces H_1,...,H_{N+1}. Chain consistency
// (a_k: H_k -> H_{k+1}) is a hard construction error; the complex property
// itself is checked by validate().
class HilbertComplex {
public:
    HilbertComplex(std::vector<InnerProductSpace> spaces,
                   std::vector<LinearMap> maps,
                   double tol = kDefaultRankTol);

    int length() const { return static_cast<int>(maps_.size()); }   // N
    int slots() const { return static_cast<int>(spaces_.size()); }  // N+1
    double tol() const { return tol_; }
    const InnerProductSpace& space(int slot) const { return spaces_.at(slot); }
    const LinearMap& map(int k) const { return maps_.at(k); }  // a_{k+1}, 0-based

    ValidationReport validate() const;
    bool isComplex() const { return validate().pass; }

    // Cross-checks the rank-nullity dimension count against the kernel
    // intersection bases; disagreement throws.
    CohomologyReport cohomology() const;

    HodgeParts hodgeDecompose(int slot, const Vector& x) const;
    LinearMap hodgeLaplacian(int slot) const;

    // Reversed chain of adjoints (a_N^*, ..., a_1^*).
    HilbertComplex dual() const;

    // Exact complex with prescribed slot dimensions and map ranks,
    // deterministic per seed. Identity Grams unless withRandomGrams.
    static HilbertComplex random(const std::vector<int>& dims,
                                 const std::vector<int>& ranks,
                                 std::uint64_t seed,
                                 bool withRandomGrams = false,
                                 double tol = kDefaultRankTol);

private:
    std::vector<InnerProductSpace> spaces_;
    std::vector<LinearMap> maps_;
    double tol_;
};

}  // namespace hilco

#endif
