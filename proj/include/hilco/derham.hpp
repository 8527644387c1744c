#ifndef HILCO_DERHAM_HPP
#define HILCO_DERHAM_HPP

#include <set>
#include <string>
#include <vector>

#include "hilco/complexes.hpp"

// Discrete de Rham complexes (grad -> curl -> div) on masked 3D voxel
// grids. Unknowns sit on staggered entities: scalars at vertices, vector
// components at edges, fluxes at faces, densities at cells. Dirichlet
// removes boundary entities (zero extension), Neumann keeps every entity
// of the closure; mixed removes the entities lying in the closure of the
// Dirichlet part of the boundary. Incidence is assembled in integers and
// scaled by 1/h afterwards; material weights enter only through Grams.

namespace hilco {

struct GridDomain3D {
    int nx = 0, ny = 0, nz = 0;
    double h = 1.0;
    std::vector<std::uint8_t> mask;  // cell (i,j,k) at ((i*ny)+j)*nz + k

    bool active(int i, int j, int k) const {
        if (i < 0 || j < 0 || k < 0 || i >= nx || j >= ny || k >= nz) return false;
        return mask[(static_cast<std::size_t>(i) * ny + j) * nz + k] != 0;
    }
    int activeCellCount() const;

    static GridDomain3D fullBox(int nx, int ny, int nz, double h = 1.0);
};

// Voxel text format: one z-slab per blank-line-separated block, rows of
// '1'/'0' characters (row index = y, column index = x).
GridDomain3D readVoxelGrid(const std::string& path, double h = 1.0);

// A grid face, identified by its normal axis and lower-corner index.
struct FaceKey {
    int axis = 0, i = 0, j = 0, k = 0;
    auto operator<=>(const FaceKey&) const = default;
};

// Faces of the closure with exactly one active incident cell.
std::vector<FaceKey> boundaryFaces(const GridDomain3D& grid);

// Box-side helper for Gamma_0 selection: comma-separated subset of
// {x-,x+,y-,y+,z-,z+}, e.g. "x-,z+".
std::set<FaceKey> gamma0FromSides(const GridDomain3D& grid, const std::string& sides);

enum class BoundaryFlavor { Dirichlet, Neumann, Mixed };

struct BoundaryConditionSpec {
    BoundaryFlavor flavor = BoundaryFlavor::Dirichlet;
    std::set<FaceKey> gamma0;  // used by Mixed; must consist of boundary faces

    static BoundaryConditionSpec dirichlet() { return {BoundaryFlavor::Dirichlet, {}}; }
    static BoundaryConditionSpec neumann() { return {BoundaryFlavor::Neumann, {}}; }
    static BoundaryConditionSpec mixed(std::set<FaceKey> g0) {
        return {BoundaryFlavor::Mixed, std::move(g0)};
    }
};

// Scalar weights nu (vertices), kappa (cells) and diagonal SPD tensors
// eps (edges), mu (faces). Off-diagonal tensor entries are rejected: the
// staggered placement keeps one component per entity.
struct MaterialWeights {
    Eigen::Matrix3d eps = Eigen::Matrix3d::Identity();
    Eigen::Matrix3d mu = Eigen::Matrix3d::Identity();
    double nu = 1.0;
    double kappa = 1.0;

    bool isIdentity() const;
    void validate() const;
};

HilbertComplex buildDeRham(const GridDomain3D& grid,
                           const BoundaryConditionSpec& bc,
                           const MaterialWeights& weights = {},
                           double tol = kDefaultRankTol);

// Cohomology dimensions under the topological name.
std::vector<int> bettiNumbers(const HilbertComplex& spec);

}  // namespace hilco

#endif
