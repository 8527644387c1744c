#ifndef HILCO_SIMPLICIAL_HPP
#define HILCO_SIMPLICIAL_HPP

#include <string>
#include <vector>

#include "hilco/complexes.hpp"

// Exterior-derivative complexes on oriented simplicial meshes. Cochain
// spaces carry identity Grams; the coboundaries are signed incidence
// transposes, validated to compose to exactly zero in integers.

namespace hilco {

struct SimplicialComplexMesh {
    int numVertices = 0;
    // simplices[d] lists the d-simplices (d >= 1) as oriented vertex tuples;
    // 0-simplices are implicit (one per vertex).
    std::vector<std::vector<std::vector<int>>> simplices;

    int dimension() const;

    // Checks vertex ranges and that every face of every simplex is present.
    void validate() const;

    // Text format: "vertices <n>" then one line per simplex: its vertex ids.
    static SimplicialComplexMesh fromFile(const std::string& path);
    static SimplicialComplexMesh parse(std::istream& in, const std::string& label);
};

enum class FormsFlavor { Dirichlet, Neumann };

// Neumann: cochain complex d_0,...,d_{n-1}, cohomology = Betti numbers.
// Dirichlet: the reversed chain of adjoints, cohomology reversed.
HilbertComplex buildFormsComplex(const SimplicialComplexMesh& mesh,
                                 FormsFlavor flavor = FormsFlavor::Neumann,
                                 double tol = kDefaultRankTol);

}  // namespace hilco

#endif
