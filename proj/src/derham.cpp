#include "hilco/derham.hpp"

#include <array>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace hilco {

namespace {

constexpr std::array<std::array<int, 2>, 3> kCyclic = {{{1, 2}, {2, 0}, {0, 1}}};

struct EntityId {
    int type;  // 0 vertex, 1 edge, 2 face, 3 cell
    int axis;  // edge direction / face normal, 0 for vertex and cell
    int i, j, k;
};

struct GridIndexer {
    const GridDomain3D& grid;

    std::array<int, 3> entityCounts(int type, int axis) const {
        const int nx = grid.nx, ny = grid.ny, nz = grid.nz;
        switch (type) {
            case 0: return {nx + 1, ny + 1, nz + 1};
            case 1: return {nx + (axis == 0 ? 0 : 1), ny + (axis == 1 ? 0 : 1),
                            nz + (axis == 2 ? 0 : 1)};
            case 2: return {nx + (axis == 0 ? 1 : 0), ny + (axis == 1 ? 1 : 0),
                            nz + (axis == 2 ? 1 : 0)};
            default: return {nx, ny, nz};
        }
    }

    // Cells incident to an entity; out-of-range cells count as inactive.
    template <typename F>
    void forIncidentCells(const EntityId& e, F&& f) const {
        std::array<std::array<int, 2>, 3> offs{};
        std::array<int, 3> counts{};
        for (int a = 0; a < 3; ++a) {
            const bool spans =
                (e.type == 3) || (e.type == 1 && a == e.axis) || (e.type == 2 && a != e.axis);
            if (spans) {
                offs[a] = {0, 0};
                counts[a] = 1;
            } else {
                offs[a] = {-1, 0};
                counts[a] = 2;
            }
        }
        for (int di = 0; di < counts[0]; ++di)
            for (int dj = 0; dj < counts[1]; ++dj)
                for (int dk = 0; dk < counts[2]; ++dk)
                    f(e.i + offs[0][di], e.j + offs[1][dj], e.k + offs[2][dk]);
    }

    bool inClosure(const EntityId& e) const {
        bool any = false;
        forIncidentCells(e, [&](int i, int j, int k) { any = any || grid.active(i, j, k); });
        return any;
    }

    // Boundary faces of the closure containing the entity.
    std::vector<FaceKey> containingFaces(const EntityId& e) const {
        std::vector<FaceKey> out;
        if (e.type == 3) return out;
        if (e.type == 2) {
            out.push_back(FaceKey{e.axis, e.i, e.j, e.k});
            return out;
        }
        const std::array<int, 3> p{e.i, e.j, e.k};
        for (int a = 0; a < 3; ++a) {
            if (e.type == 1 && a == e.axis) continue;
            // Face normal a contains the entity when the remaining spanning
            // axes straddle it.
            std::vector<int> freeAxes;
            for (int b : kCyclic[a])
                if (!(e.type == 1 && b == e.axis)) freeAxes.push_back(b);
            const int n = static_cast<int>(freeAxes.size());
            for (int bits = 0; bits < (1 << n); ++bits) {
                std::array<int, 3> q = p;
                for (int t = 0; t < n; ++t)
                    if (bits & (1 << t)) q[freeAxes[t]] -= 1;
                out.push_back(FaceKey{a, q[0], q[1], q[2]});
            }
        }
        return out;
    }
};

bool isBoundaryFace(const GridDomain3D& grid, const FaceKey& f) {
    const int a = f.axis;
    std::array<int, 3> lo{f.i, f.j, f.k};
    std::array<int, 3> hi = lo;
    lo[a] -= 1;
    const bool c0 = grid.active(lo[0], lo[1], lo[2]);
    const bool c1 = grid.active(hi[0], hi[1], hi[2]);
    return c0 != c1;
}

}  // namespace

int GridDomain3D::activeCellCount() const {
    int n = 0;
    for (auto v : mask) n += v != 0;
    return n;
}

GridDomain3D GridDomain3D::fullBox(int nx, int ny, int nz, double h) {
    if (nx <= 0 || ny <= 0 || nz <= 0) throw std::invalid_argument("fullBox: bad extents");
    GridDomain3D g;
    g.nx = nx;
    g.ny = ny;
    g.nz = nz;
    g.h = h;
    g.mask.assign(static_cast<std::size_t>(nx) * ny * nz, 1);
    return g;
}

GridDomain3D readVoxelGrid(const std::string& path, double h) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::vector<std::vector<std::string>> slabs(1);
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
        if (!line.empty() && line[0] == '#') continue;
        if (line.empty()) {
            if (!slabs.back().empty()) slabs.emplace_back();
            continue;
        }
        for (char c : line)
            if (c != '0' && c != '1')
                throw std::runtime_error(path + ": voxel rows must be '0'/'1' characters");
        slabs.back().push_back(line);
    }
    if (slabs.back().empty()) slabs.pop_back();
    if (slabs.empty()) throw std::runtime_error(path + ": empty voxel file");

    const int nz = static_cast<int>(slabs.size());
    const int ny = static_cast<int>(slabs[0].size());
    const int nx = static_cast<int>(slabs[0][0].size());
    GridDomain3D g;
    g.nx = nx;
    g.ny = ny;
    g.nz = nz;
    g.h = h;
    if (!(h > 0.0)) throw std::invalid_argument("readVoxelGrid: spacing must be positive");
    g.mask.assign(static_cast<std::size_t>(nx) * ny * nz, 0);
    for (int k = 0; k < nz; ++k) {
        if (static_cast<int>(slabs[k].size()) != ny)
            throw std::runtime_error(path + ": ragged voxel slabs");
        for (int j = 0; j < ny; ++j) {
            if (static_cast<int>(slabs[k][j].size()) != nx)
                throw std::runtime_error(path + ": ragged voxel rows");
            for (int i = 0; i < nx; ++i)
                g.mask[(static_cast<std::size_t>(i) * ny + j) * nz + k] =
                    slabs[k][j][i] == '1';
        }
    }
    if (g.activeCellCount() == 0) throw std::runtime_error(path + ": mask has no active cell");
    return g;
}

std::vector<FaceKey> boundaryFaces(const GridDomain3D& grid) {
    std::vector<FaceKey> out;
    GridIndexer ix{grid};
    for (int axis = 0; axis < 3; ++axis) {
        const auto n = ix.entityCounts(2, axis);
        for (int i = 0; i < n[0]; ++i)
            for (int j = 0; j < n[1]; ++j)
                for (int k = 0; k < n[2]; ++k) {
                    FaceKey f{axis, i, j, k};
                    if (isBoundaryFace(grid, f)) out.push_back(f);
                }
    }
    return out;
}

std::set<FaceKey> gamma0FromSides(const GridDomain3D& grid, const std::string& sides) {
    static const std::map<std::string, std::pair<int, int>> kSides = {
        {"x-", {0, 0}}, {"x+", {0, 1}}, {"y-", {1, 0}},
        {"y+", {1, 1}}, {"z-", {2, 0}}, {"z+", {2, 1}}};
    std::vector<std::pair<int, int>> wanted;
    std::stringstream ss(sides);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        auto it = kSides.find(tok);
        if (it == kSides.end())
            throw std::invalid_argument("gamma0FromSides: unknown side '" + tok + "'");
        wanted.push_back(it->second);
    }
    std::set<FaceKey> g0;
    const std::array<int, 3> lims{grid.nx, grid.ny, grid.nz};
    for (const FaceKey& f : boundaryFaces(grid)) {
        const int pos = f.axis == 0 ? f.i : f.axis == 1 ? f.j : f.k;
        for (auto [axis, side] : wanted)
            if (axis == f.axis && pos == (side == 0 ? 0 : lims[axis])) {
                g0.insert(f);
                break;
            }
    }
    return g0;
}

bool MaterialWeights::isIdentity() const {
    return nu == 1.0 && kappa == 1.0 && eps.isIdentity(0.0) && mu.isIdentity(0.0);
}

void MaterialWeights::validate() const {
    if (!(nu > 0.0) || !(kappa > 0.0))
        throw std::invalid_argument("MaterialWeights: nu and kappa must be positive");
    for (const Eigen::Matrix3d* t : {&eps, &mu}) {
        for (int r = 0; r < 3; ++r) {
            if (!((*t)(r, r) > 0.0))
                throw std::invalid_argument("MaterialWeights: tensor diagonal must be positive");
            for (int c = 0; c < 3; ++c)
                if (r != c && (*t)(r, c) != 0.0)
                    throw std::invalid_argument(
                        "MaterialWeights: only scalar or diagonal tensors are supported "
                        "on staggered grids");
        }
    }
}

HilbertComplex buildDeRham(const GridDomain3D& grid, const BoundaryConditionSpec& bc,
                           const MaterialWeights& weights, double tol) {
    if (grid.activeCellCount() == 0)
        throw std::invalid_argument("buildDeRham: mask has no active cell");
    if (!(grid.h > 0.0)) throw std::invalid_argument("buildDeRham: spacing must be positive");
    weights.validate();

    GridIndexer ix{grid};

    std::set<FaceKey> gamma0;
    if (bc.flavor == BoundaryFlavor::Dirichlet) {
        for (const FaceKey& f : boundaryFaces(grid)) gamma0.insert(f);
    } else if (bc.flavor == BoundaryFlavor::Mixed) {
        gamma0 = bc.gamma0;
        for (const FaceKey& f : gamma0)
            if (!isBoundaryFace(grid, f))
                throw std::invalid_argument(
                    "buildDeRham: Gamma_0 contains a non-boundary face (inconsistent "
                    "partition)");
    }

    // An entity is kept when it meets the closure and does not lie in the
    // closure of Gamma_0 (zero extension of the Dirichlet trace).
    auto kept = [&](const EntityId& e) -> bool {
        if (!ix.inClosure(e)) return false;
        if (gamma0.empty()) return true;
        for (const FaceKey& f : ix.containingFaces(e))
            if (gamma0.count(f)) return false;
        return true;
    };

    // Enumerate kept entities per slot in lexicographic order.
    // Slot layout: vertices; edges by axis; faces by normal axis; cells.
    struct SlotIndex {
        std::map<std::tuple<int, int, int, int>, int> id;  // (axis,i,j,k) -> index
        int count = 0;
        std::vector<double> weight;
    };
    std::array<SlotIndex, 4> slot;

    auto slotWeight = [&](int type, int axis) -> double {
        switch (type) {
            case 0: return weights.nu;
            case 1: return weights.eps(axis, axis);
            case 2: return weights.mu(axis, axis);
            default: return weights.kappa;
        }
    };

    for (int type = 0; type < 4; ++type) {
        const int axes = (type == 1 || type == 2) ? 3 : 1;
        for (int axis = 0; axis < axes; ++axis) {
            const auto n = ix.entityCounts(type, axis);
            for (int i = 0; i < n[0]; ++i)
                for (int j = 0; j < n[1]; ++j)
                    for (int k = 0; k < n[2]; ++k) {
                        EntityId e{type, axis, i, j, k};
                        if (type == 3 ? grid.active(i, j, k) : kept(e)) {
                            slot[type].id[{axis, i, j, k}] = slot[type].count++;
                            slot[type].weight.push_back(slotWeight(type, axis));
                        }
                    }
        }
    }

    auto lookup = [&](int type, int axis, int i, int j, int k) -> int {
        auto it = slot[type].id.find({axis, i, j, k});
        return it == slot[type].id.end() ? -1 : it->second;
    };

    // Integer incidence over kept entities; dropped entities read as zero.
    Matrix d0 = Matrix::Zero(slot[1].count, slot[0].count);
    Matrix d1 = Matrix::Zero(slot[2].count, slot[1].count);
    Matrix d2 = Matrix::Zero(slot[3].count, slot[2].count);

    for (const auto& [key, row] : slot[1].id) {
        auto [axis, i, j, k] = key;
        std::array<int, 3> p{i, j, k}, q{i, j, k};
        q[axis] += 1;
        if (int c = lookup(0, 0, q[0], q[1], q[2]); c >= 0) d0(row, c) += 1.0;
        if (int c = lookup(0, 0, p[0], p[1], p[2]); c >= 0) d0(row, c) -= 1.0;
    }
    for (const auto& [key, row] : slot[2].id) {
        auto [axis, i, j, k] = key;
        const int b = kCyclic[axis][0], c = kCyclic[axis][1];
        std::array<int, 3> p{i, j, k};
        std::array<int, 3> pb = p, pc = p;
        pb[b] += 1;
        pc[c] += 1;
        // (curl w)_axis = d_b w_c - d_c w_b.
        if (int e = lookup(1, c, pb[0], pb[1], pb[2]); e >= 0) d1(row, e) += 1.0;
        if (int e = lookup(1, c, p[0], p[1], p[2]); e >= 0) d1(row, e) -= 1.0;
        if (int e = lookup(1, b, pc[0], pc[1], pc[2]); e >= 0) d1(row, e) -= 1.0;
        if (int e = lookup(1, b, p[0], p[1], p[2]); e >= 0) d1(row, e) += 1.0;
    }
    for (const auto& [key, row] : slot[3].id) {
        auto [axis0, i, j, k] = key;
        (void)axis0;
        for (int a = 0; a < 3; ++a) {
            std::array<int, 3> p{i, j, k}, q{i, j, k};
            q[a] += 1;
            if (int f = lookup(2, a, q[0], q[1], q[2]); f >= 0) d2(row, f) += 1.0;
            if (int f = lookup(2, a, p[0], p[1], p[2]); f >= 0) d2(row, f) -= 1.0;
        }
    }

    // The complex property must hold exactly in the integer incidence,
    // before any floating-point scaling.
    auto exactZero = [](const Matrix& m) {
        return m.size() == 0 || m.cwiseAbs().maxCoeff() == 0.0;
    };
    if (!exactZero(d1 * d0) || !exactZero(d2 * d1))
        throw std::runtime_error("buildDeRham: incidence composition is not exactly zero");

    std::vector<InnerProductSpace> spaces;
    for (int type = 0; type < 4; ++type) {
        if (weights.isIdentity()) {
            spaces.emplace_back(slot[type].count);
        } else {
            Vector w = Eigen::Map<const Vector>(slot[type].weight.data(),
                                                slot[type].weight.size());
            spaces.emplace_back(Matrix(w.asDiagonal()));
        }
    }

    const double invH = 1.0 / grid.h;
    std::vector<LinearMap> maps;
    maps.emplace_back(spaces[0], spaces[1], Matrix(d0 * invH));
    maps.emplace_back(spaces[1], spaces[2], Matrix(d1 * invH));
    maps.emplace_back(spaces[2], spaces[3], Matrix(d2 * invH));
    return HilbertComplex(std::move(spaces), std::move(maps), tol);
}

std::vector<int> bettiNumbers(const HilbertComplex& spec) {
    return spec.cohomology().dims;
}

}  // namespace hilco
