#ifndef HILCO_LINMAP_HPP
#define HILCO_LINMAP_HPP

#include <Eigen/Dense>
#include <vector>

// Weighted-inner-product linear algebra: spaces with SPD Gram matrices,
// maps between them, Gram-weighted adjoints, rank/kernel/range data and
// orthogonal projections. Everything here is immutable after construction.

namespace hilco {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Relative rank threshold: a singular value counts toward the rank when it
// exceeds tol * sigma_max * max(rows, cols).
inline constexpr double kDefaultRankTol = 1e-10;

// A finite-dimensional real vector space with an SPD Gram matrix defining
// the inner product <x,y> = x^T G y. The identity Gram is the default and
// is special-cased so that unweighted computations stay exact.
class InnerProductSpace {
public:
    explicit InnerProductSpace(int dim);
    explicit InnerProductSpace(Matrix gram);

    int dim() const { return dim_; }
    const Matrix& gram() const { return gram_; }
    bool identityGram() const { return identity_; }

    double inner(const Vector& x, const Vector& y) const;
    double norm(const Vector& x) const;

    // Whitening transports vectors to coordinates in which the inner
    // product is Euclidean: xhat = L^T x with G = L L^T.
    Vector whiten(const Vector& x) const;
    Vector unwhiten(const Vector& xhat) const;
    // Column-wise variants.
    Matrix whitenCols(const Matrix& m) const;
    Matrix unwhitenCols(const Matrix& mhat) const;

    // Lower Cholesky factor of the Gram matrix.
    const Matrix& cholFactor() const { return cholL_; }

    bool sameAs(const InnerProductSpace& other) const;

private:
    int dim_;
    Matrix gram_;
    bool identity_;
    Matrix cholL_;
};

// A matrix between two InnerProductSpaces.
class LinearMap {
public:
    LinearMap(InnerProductSpace dom, InnerProductSpace cod, Matrix entries);

    const InnerProductSpace& dom() const { return dom_; }
    const InnerProductSpace& cod() const { return cod_; }
    const Matrix& entries() const { return entries_; }

    Vector apply(const Vector& x) const;

    // Gram-weighted adjoint: G_dom^{-1} E^T G_cod, computed through the
    // Cholesky factors of the Grams.
    LinearMap adjoint() const;

    // Entries of this map in whitened coordinates on both sides; the
    // whitened matrix of the adjoint is the plain transpose.
    Matrix whitened() const;

    static LinearMap zero(const InnerProductSpace& dom, const InnerProductSpace& cod);
    static LinearMap identity(const InnerProductSpace& space);

private:
    InnerProductSpace dom_;
    InnerProductSpace cod_;
    Matrix entries_;
};

// b after a; requires a.cod == b.dom.
LinearMap compose(const LinearMap& b, const LinearMap& a);

// Columns are gram-orthonormal vectors of `space` spanning a subspace.
struct SubspaceBasis {
    InnerProductSpace space;
    Matrix columns;

    int dim() const { return static_cast<int>(columns.cols()); }

    static SubspaceBasis full(const InnerProductSpace& space);
    static SubspaceBasis empty(const InnerProductSpace& space);
};

struct RankDecomposition {
    int rank = 0;
    SubspaceBasis kernel;  // gram-orthonormal basis of ker(a) in dom
    SubspaceBasis range;   // gram-orthonormal basis of ran(a) in cod
    std::vector<double> singularValues;  // gram-weighted, descending
};

RankDecomposition rankAndKernel(const LinearMap& a, double tol = kDefaultRankTol);

// Gram-orthogonal projection of x onto the subspace.
Vector project(const SubspaceBasis& onto, const Vector& x);

// Gram-orthonormal basis of span(u) intersected with span(v), computed as
// the kernel of the stacked orthogonal-projector complements.
SubspaceBasis intersect(const SubspaceBasis& u, const SubspaceBasis& v,
                        double tol = kDefaultRankTol);

}  // namespace hilco

#endif
