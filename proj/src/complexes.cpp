#include "hilco/complexes.hpp"

#include <Eigen/QR>
#include <random>
#include <stdexcept>

namespace hilco {

namespace {

double maxAbs(const Matrix& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

// Random gram-orthonormal columns, via QR in whitened coordinates.
Matrix randomOrthonormal(const InnerProductSpace& space, int cols, std::mt19937_64& rng) {
    const int n = space.dim();
    if (cols > n) throw std::invalid_argument("randomOrthonormal: too many columns");
    std::normal_distribution<double> gauss(0.0, 1.0);
    Matrix g(n, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) g(i, j) = gauss(rng);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ() * Matrix::Identity(n, cols);
    return space.unwhitenCols(q);
}

Matrix randomSpdGram(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Matrix g(n, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) g(i, j) = gauss(rng);
    Matrix spd = g * g.transpose() / std::max(1, n);
    spd += Matrix::Identity(n, n) * 0.5;
    // Exact symmetry regardless of summation order above.
    return ((spd + spd.transpose()) * 0.5).eval();
}

}  // namespace

HilbertComplex::HilbertComplex(std::vector<InnerProductSpace> spaces,
                               std::vector<LinearMap> maps, double tol)
    : spaces_(std::move(spaces)), maps_(std::move(maps)), tol_(tol) {
    if (spaces_.size() != maps_.size() + 1)
        throw std::invalid_argument("HilbertComplex: need N+1 spaces for N maps");
    if (spaces_.empty())
        throw std::invalid_argument("HilbertComplex: empty chain");
    for (std::size_t k = 0; k < maps_.size(); ++k) {
        if (!maps_[k].dom().sameAs(spaces_[k]) || !maps_[k].cod().sameAs(spaces_[k + 1]))
            throw std::invalid_argument("HilbertComplex: chain inconsistency at map " +
                                        std::to_string(k + 1));
    }
    if (!(tol_ > 0.0 && tol_ < 1.0))
        throw std::invalid_argument("HilbertComplex: tol must lie in (0,1)");
}

ValidationReport HilbertComplex::validate() const {
    ValidationReport report;
    for (int k = 0; k + 1 < length(); ++k) {
        const Matrix prod = maps_[k + 1].entries() * maps_[k].entries();
        const double residual = maxAbs(prod);
        const double scale = maxAbs(maps_[k + 1].entries()) * maxAbs(maps_[k].entries());
        const bool ok = residual <= tol_ * scale;
        report.residuals.push_back(residual);
        report.scales.push_back(scale);
        report.pairPass.push_back(ok);
        report.pass = report.pass && ok;
    }
    return report;
}

CohomologyReport HilbertComplex::cohomology() const {
    const int N = length();
    CohomologyReport report;
    std::vector<RankDecomposition> decomp;
    decomp.reserve(N);
    for (int k = 0; k < N; ++k) decomp.push_back(rankAndKernel(maps_[k], tol_));

    for (int slot = 0; slot <= N; ++slot) {
        // dim ker(a_k) - rank(a_{k-1}) with a_0 = a_{N+1} = 0.
        const int kerDim = slot < N ? decomp[slot].kernel.dim() : spaces_[slot].dim();
        const int prevRank = slot > 0 ? decomp[slot - 1].rank : 0;
        const int dimByRank = kerDim - prevRank;

        SubspaceBasis kerFwd = slot < N ? decomp[slot].kernel
                                        : SubspaceBasis::full(spaces_[slot]);
        SubspaceBasis kerBwd = slot > 0
            ? rankAndKernel(maps_[slot - 1].adjoint(), tol_).kernel
            : SubspaceBasis::full(spaces_[slot]);
        SubspaceBasis basis = intersect(kerFwd, kerBwd, tol_);

        if (basis.dim() != dimByRank)
            throw std::runtime_error(
                "cohomology: rank-nullity and kernel-intersection computations disagree "
                "at slot " + std::to_string(slot + 1) + " (" +
                std::to_string(dimByRank) + " vs " + std::to_string(basis.dim()) + ")");
        report.dims.push_back(dimByRank);
        report.bases.push_back(std::move(basis));
    }
    return report;
}

HodgeParts HilbertComplex::hodgeDecompose(int slot, const Vector& x) const {
    if (slot < 0 || slot >= slots())
        throw std::invalid_argument("hodgeDecompose: slot out of range");
    if (x.size() != spaces_[slot].dim())
        throw std::invalid_argument("hodgeDecompose: vector dimension mismatch");
    HodgeParts parts{Vector::Zero(x.size()), Vector::Zero(x.size()), Vector::Zero(x.size())};
    if (slot > 0)
        parts.exact = project(rankAndKernel(maps_[slot - 1], tol_).range, x);
    if (slot < length())
        parts.coexact = project(rankAndKernel(maps_[slot].adjoint(), tol_).range, x);
    parts.harmonic = x - parts.exact - parts.coexact;
    return parts;
}

LinearMap HilbertComplex::hodgeLaplacian(int slot) const {
    if (slot < 0 || slot >= slots())
        throw std::invalid_argument("hodgeLaplacian: slot out of range");
    const int n = spaces_[slot].dim();
    Matrix entries = Matrix::Zero(n, n);
    if (slot > 0)
        entries += maps_[slot - 1].entries() * maps_[slot - 1].adjoint().entries();
    if (slot < length())
        entries += maps_[slot].adjoint().entries() * maps_[slot].entries();
    return LinearMap(spaces_[slot], spaces_[slot], std::move(entries));
}

HilbertComplex HilbertComplex::dual() const {
    std::vector<InnerProductSpace> spaces(spaces_.rbegin(), spaces_.rend());
    std::vector<LinearMap> maps;
    for (int k = length() - 1; k >= 0; --k) maps.push_back(maps_[k].adjoint());
    return HilbertComplex(std::move(spaces), std::move(maps), tol_);
}

HilbertComplex HilbertComplex::random(const std::vector<int>& dims,
                                      const std::vector<int>& ranks,
                                      std::uint64_t seed, bool withRandomGrams,
                                      double tol) {
    const int N = static_cast<int>(ranks.size());
    if (dims.size() != ranks.size() + 1)
        throw std::invalid_argument("random: need N+1 dims for N ranks");
    for (int k = 0; k <= N; ++k) {
        const int rPrev = k > 0 ? ranks[k - 1] : 0;
        const int rNext = k < N ? ranks[k] : 0;
        if (rPrev < 0 || rNext < 0 || rPrev + rNext > dims[k])
            throw std::invalid_argument("random: infeasible ranks at slot " +
                                        std::to_string(k + 1));
    }

    std::mt19937_64 rng(seed);
    std::vector<InnerProductSpace> spaces;
    for (int k = 0; k <= N; ++k) {
        if (withRandomGrams && dims[k] > 0)
            spaces.emplace_back(randomSpdGram(dims[k], rng));
        else
            spaces.emplace_back(dims[k]);
    }

    // Inside each H_k draw r_{k-1} + r_k mutually gram-orthonormal columns:
    // the first block receives ran(a_{k-1}), the second feeds a_k.
    std::vector<Matrix> incoming(N + 1), outgoing(N + 1);
    for (int k = 0; k <= N; ++k) {
        const int rPrev = k > 0 ? ranks[k - 1] : 0;
        const int rNext = k < N ? ranks[k] : 0;
        Matrix q = randomOrthonormal(spaces[k], rPrev + rNext, rng);
        incoming[k] = q.leftCols(rPrev);
        outgoing[k] = q.rightCols(rNext);
    }

    std::uniform_real_distribution<double> sigma(0.5, 2.0);
    std::vector<LinearMap> maps;
    for (int k = 0; k < N; ++k) {
        Matrix entries = Matrix::Zero(dims[k + 1], dims[k]);
        if (ranks[k] > 0) {
            Vector sv(ranks[k]);
            for (int i = 0; i < ranks[k]; ++i) sv(i) = sigma(rng);
            // a_k = U_{k+1} Sigma <V_k, .>_G
            Matrix vtg = spaces[k].identityGram()
                ? Matrix(outgoing[k].transpose())
                : Matrix(outgoing[k].transpose() * spaces[k].gram());
            entries = incoming[k + 1] * sv.asDiagonal() * vtg;
        }
        maps.emplace_back(spaces[k], spaces[k + 1], std::move(entries));
    }
    return HilbertComplex(std::move(spaces), std::move(maps), tol);
}

}  // namespace hilco
