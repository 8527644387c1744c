#ifndef HILCO_ANNIHILATING_HPP
#define HILCO_ANNIHILATING_HPP

#include <vector>

#include "hilco/complexes.hpp"
#include "hilco/linmap.hpp"

// Skew-selfadjoint block operators built from a Hilbert complex: the
// components S_k supported on blocks (k+1,k) and (k,k+1), their sum S,
// annihilation certificates, the generalized Helmholtz decomposition and
// the Poincare/Fredholm toolbox on the product space.

namespace hilco {

struct ProductSpace {
    std::vector<InnerProductSpace> slots;
    std::vector<int> offsets;  // prefix sums of slot dims
    int totalDim = 0;
    InnerProductSpace whole;   // block-diagonal Gram

    explicit ProductSpace(std::vector<InnerProductSpace> slotSpaces);

    int slotDim(int k) const { return slots[k].dim(); }
    Eigen::VectorBlock<const Vector> slotOf(const Vector& x, int k) const;
};

enum class BlockMode { Skew, Sym };

class SkewBlockOperator {
public:
    SkewBlockOperator(HilbertComplex source, BlockMode mode);

    const ProductSpace& space() const { return space_; }
    const HilbertComplex& source() const { return source_; }
    BlockMode mode() const { return mode_; }
    int partCount() const { return source_.length(); }

    // a_k entries sitting at block (k+1,k), and the (k,k+1) block
    // (-a_k^* in skew mode, +a_k^* in sym mode).
    const Matrix& subBlock(int k) const { return subBlocks_.at(k); }
    const Matrix& superBlock(int k) const { return superBlocks_.at(k); }
    // Whitened subdiagonal block; the whitened superdiagonal block is its
    // (sign-flipped) transpose.
    const Matrix& whitenedSubBlock(int k) const { return whitenedSub_.at(k); }

    const Matrix& partEntries(int k) const { return partEntries_.at(k); }
    const Matrix& sumEntries() const { return sumEntries_; }
    LinearMap part(int k) const;
    LinearMap sum() const;

    // Parts-vs-sum redundancy and (skew-)selfadjointness of each part.
    double consistencyResidual() const;

private:
    HilbertComplex source_;
    BlockMode mode_;
    ProductSpace space_;
    std::vector<Matrix> subBlocks_;
    std::vector<Matrix> superBlocks_;
    std::vector<Matrix> whitenedSub_;
    std::vector<Matrix> partEntries_;
    Matrix sumEntries_;
};

SkewBlockOperator buildBlockOperator(const HilbertComplex& spec,
                                     BlockMode mode = BlockMode::Skew);

struct PairResidual {
    int k = 0, l = 0;       // 0-based part indices, k != l
    double residual = 0.0;  // max-abs of the whitened product S_k S_l
    double scale = 0.0;
    bool pass = true;
};

struct AnnihilationCertificate {
    std::vector<PairResidual> pairs;
    double maxCommutatorResidual = 0.0;
    double tol = 0.0;
    bool pass = true;
};

AnnihilationCertificate verifyAnnihilating(const SkewBlockOperator& op, double tol);
inline AnnihilationCertificate verifyAnnihilating(const SkewBlockOperator& op) {
    return verifyAnnihilating(op, op.source().tol());
}

struct EquivalenceReport {
    bool complexHolds = false;
    bool annihilationHolds = false;
    bool agree = false;
    ValidationReport validation;
    AnnihilationCertificate certificate;
};

// Theorem check: the complex property and the annihilation property must
// decide identically on any chain-consistent input.
EquivalenceReport equivalenceCheck(const HilbertComplex& candidate);

struct HelmholtzParts {
    Vector kernelPart;               // in ker(S) = product of the K_k
    std::vector<Vector> rangeParts;  // one per ran(S_k)
};

HelmholtzParts generalizedHelmholtz(const SkewBlockOperator& op, const Vector& x);

// 1 / (smallest gram-weighted singular value of S above the rank threshold).
double poincareConstant(const SkewBlockOperator& op, double tol = kDefaultRankTol);
double poincareConstantOfPart(const SkewBlockOperator& op, int k,
                              double tol = kDefaultRankTol);

struct FredholmReport {
    int dimKer = 0;
    int dimCoker = 0;
    int index = 0;
    bool decompositionHolds = false;   // H = ran(S) + ker(S), dimension count
    double orthogonalityResidual = 0;  // ran(S) vs ker(S)
};

FredholmReport fredholmReport(const SkewBlockOperator& op, double tol = kDefaultRankTol);

struct RestrictedIsoReport {
    double conditionNumber = 0.0;       // extreme positive singular values of S_k
    double smallestRestrictedSv = 0.0;  // of the restricted square matrix
    bool bijective = false;
    double subspaceMismatch = 0.0;      // ran(S_k) vs ker(S_k)^perp projectors
};

RestrictedIsoReport restrictedIso(const SkewBlockOperator& op, int k,
                                  double tol = kDefaultRankTol);

// Diagonal blocks of -S^2, one LinearMap per slot.
std::vector<LinearMap> sSquaredBlocks(const SkewBlockOperator& op);

struct BlockEntry {
    int row = 0, col = 0;  // 0-based block position
    double magnitude = 0.0;
};

// Nonzero block positions of every product S_k S_l, Appendix-style.
struct ProductTable {
    int parts = 0;
    double tol = 0.0;
    // blocks[k][l] lists the blocks of S_k S_l above threshold.
    std::vector<std::vector<std::vector<BlockEntry>>> blocks;
};

ProductTable appendixProductTable(const SkewBlockOperator& op);
ProductTable appendixProductTable(const SkewBlockOperator& op, double tol);

}  // namespace hilco

#endif
