#include "hilco/linmap.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <stdexcept>

namespace hilco {

namespace {

bool isIdentity(const Matrix& m) {
    return m.isIdentity(0.0);
}

// Solves X * U = B for X with U upper triangular, i.e. X = B * U^{-1}.
Matrix rightSolveUpper(const Matrix& u, const Matrix& b) {
    return u.transpose().triangularView<Eigen::Lower>().solve(b.transpose()).transpose();
}

}  // namespace

InnerProductSpace::InnerProductSpace(int dim)
    : dim_(dim), gram_(Matrix::Identity(dim, dim)), identity_(true),
      cholL_(Matrix::Identity(dim, dim)) {
    if (dim < 0) throw std::invalid_argument("InnerProductSpace: negative dimension");
}

InnerProductSpace::InnerProductSpace(Matrix gram)
    : dim_(static_cast<int>(gram.rows())), gram_(std::move(gram)) {
    if (gram_.rows() != gram_.cols())
        throw std::invalid_argument("InnerProductSpace: gram must be square");
    if (dim_ == 0) {
        identity_ = true;
        cholL_ = gram_;
        return;
    }
    const double scale = gram_.cwiseAbs().maxCoeff();
    if ((gram_ - gram_.transpose()).cwiseAbs().maxCoeff() > 1e-14 * std::max(scale, 1.0))
        throw std::invalid_argument("InnerProductSpace: gram is not symmetric");
    identity_ = isIdentity(gram_);
    if (identity_) {
        cholL_ = Matrix::Identity(dim_, dim_);
        return;
    }
    Eigen::LLT<Matrix> llt(gram_);
    if (llt.info() != Eigen::Success)
        throw std::invalid_argument("InnerProductSpace: gram is not positive definite");
    cholL_ = llt.matrixL();
}

double InnerProductSpace::inner(const Vector& x, const Vector& y) const {
    if (x.size() != dim_ || y.size() != dim_)
        throw std::invalid_argument("inner: dimension mismatch");
    if (identity_) return x.dot(y);
    return x.dot(gram_ * y);
}

double InnerProductSpace::norm(const Vector& x) const {
    if (identity_) return x.norm();
    return std::sqrt(std::max(0.0, inner(x, x)));
}

Vector InnerProductSpace::whiten(const Vector& x) const {
    if (identity_) return x;
    return cholL_.transpose() * x;
}

Vector InnerProductSpace::unwhiten(const Vector& xhat) const {
    if (identity_) return xhat;
    return cholL_.transpose().triangularView<Eigen::Upper>().solve(xhat);
}

Matrix InnerProductSpace::whitenCols(const Matrix& m) const {
    if (identity_) return m;
    return cholL_.transpose() * m;
}

Matrix InnerProductSpace::unwhitenCols(const Matrix& mhat) const {
    if (identity_) return mhat;
    return cholL_.transpose().triangularView<Eigen::Upper>().solve(mhat);
}

bool InnerProductSpace::sameAs(const InnerProductSpace& other) const {
    if (dim_ != other.dim_) return false;
    if (identity_ && other.identity_) return true;
    return gram_ == other.gram_;
}

LinearMap::LinearMap(InnerProductSpace dom, InnerProductSpace cod, Matrix entries)
    : dom_(std::move(dom)), cod_(std::move(cod)), entries_(std::move(entries)) {
    if (entries_.rows() != cod_.dim() || entries_.cols() != dom_.dim())
        throw std::invalid_argument("LinearMap: entry dimensions do not match spaces");
}

Vector LinearMap::apply(const Vector& x) const {
    if (x.size() != dom_.dim())
        throw std::invalid_argument("LinearMap::apply: dimension mismatch");
    return entries_ * x;
}

LinearMap LinearMap::adjoint() const {
    if (dom_.identityGram() && cod_.identityGram())
        return LinearMap(cod_, dom_, entries_.transpose());
    // G_dom^{-1} E^T G_cod via Cholesky factors: L_dom^{-T} L_dom^{-1} E^T G_cod.
    Matrix rhs = entries_.transpose() * cod_.gram();
    Matrix tmp = dom_.cholFactor().triangularView<Eigen::Lower>().solve(rhs);
    Matrix adj = dom_.cholFactor().transpose().triangularView<Eigen::Upper>().solve(tmp);
    return LinearMap(cod_, dom_, std::move(adj));
}

Matrix LinearMap::whitened() const {
    if (dom_.identityGram() && cod_.identityGram()) return entries_;
    Matrix lhs = cod_.identityGram() ? entries_
                                     : Matrix(cod_.cholFactor().transpose() * entries_);
    if (dom_.identityGram()) return lhs;
    return rightSolveUpper(dom_.cholFactor().transpose(), lhs);
}

LinearMap LinearMap::zero(const InnerProductSpace& dom, const InnerProductSpace& cod) {
    return LinearMap(dom, cod, Matrix::Zero(cod.dim(), dom.dim()));
}

LinearMap LinearMap::identity(const InnerProductSpace& space) {
    return LinearMap(space, space, Matrix::Identity(space.dim(), space.dim()));
}

LinearMap compose(const LinearMap& b, const LinearMap& a) {
    if (!a.cod().sameAs(b.dom()))
        throw std::invalid_argument("compose: codomain of a does not match domain of b");
    return LinearMap(a.dom(), b.cod(), b.entries() * a.entries());
}

SubspaceBasis SubspaceBasis::full(const InnerProductSpace& space) {
    return SubspaceBasis{space, space.unwhitenCols(Matrix::Identity(space.dim(), space.dim()))};
}

SubspaceBasis SubspaceBasis::empty(const InnerProductSpace& space) {
    return SubspaceBasis{space, Matrix::Zero(space.dim(), 0)};
}

RankDecomposition rankAndKernel(const LinearMap& a, double tol) {
    if (!(tol > 0.0 && tol < 1.0))
        throw std::invalid_argument("rankAndKernel: tol must lie in (0,1)");
    const int m = a.cod().dim();
    const int n = a.dom().dim();
    RankDecomposition out{0, SubspaceBasis::full(a.dom()), SubspaceBasis::empty(a.cod()), {}};
    if (m == 0 || n == 0) return out;

    Eigen::BDCSVD<Matrix> svd(a.whitened(), Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double thresh = tol * sv(0) * std::max(m, n);
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > thresh) ++rank;
    out.rank = rank;
    out.singularValues.assign(sv.data(), sv.data() + sv.size());
    out.kernel = SubspaceBasis{a.dom(),
        a.dom().unwhitenCols(svd.matrixV().rightCols(n - rank))};
    out.range = SubspaceBasis{a.cod(),
        a.cod().unwhitenCols(svd.matrixU().leftCols(rank))};
    return out;
}

Vector project(const SubspaceBasis& onto, const Vector& x) {
    if (x.size() != onto.space.dim())
        throw std::invalid_argument("project: dimension mismatch");
    if (onto.dim() == 0) return Vector::Zero(x.size());
    if (onto.space.identityGram())
        return onto.columns * (onto.columns.transpose() * x);
    return onto.columns * (onto.columns.transpose() * (onto.space.gram() * x));
}

SubspaceBasis intersect(const SubspaceBasis& u, const SubspaceBasis& v, double tol) {
    if (!u.space.sameAs(v.space))
        throw std::invalid_argument("intersect: bases live in different spaces");
    const InnerProductSpace& space = u.space;
    const int n = space.dim();
    if (n == 0 || u.dim() == 0 || v.dim() == 0) return SubspaceBasis::empty(space);

    Matrix uh = space.whitenCols(u.columns);
    Matrix vh = space.whitenCols(v.columns);
    Matrix stacked(2 * n, n);
    stacked.topRows(n) = Matrix::Identity(n, n) - uh * uh.transpose();
    stacked.bottomRows(n) = Matrix::Identity(n, n) - vh * vh.transpose();

    // The stacked matrix is a sum of two orthogonal projectors, so its
    // singular values cluster at 0 for intersection directions.  Jacobi
    // resolves that cluster to machine precision where divide-and-conquer
    // can leave sqrt(eps)-sized artifacts; the matrix is small enough
    // (one call per cohomology slot) that the extra cost is negligible.
    Eigen::JacobiSVD<Matrix> svd(stacked, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double thresh = tol * std::max(sv(0), 1.0) * 2 * n;
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > thresh) ++rank;
    return SubspaceBasis{space, space.unwhitenCols(svd.matrixV().rightCols(n - rank))};
}

}  // namespace hilco
