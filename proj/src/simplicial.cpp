#include "hilco/simplicial.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace hilco {

namespace {

// Parity of the permutation taking `from` to `to` (same element sets).
int permutationSign(const std::vector<int>& from, const std::vector<int>& to) {
    std::vector<int> perm;
    for (int v : to) {
        auto it = std::find(from.begin(), from.end(), v);
        if (it == from.end()) return 0;
        perm.push_back(static_cast<int>(it - from.begin()));
    }
    int sign = 1;
    std::vector<bool> seen(perm.size(), false);
    for (std::size_t i = 0; i < perm.size(); ++i) {
        if (seen[i]) continue;
        int len = 0;
        for (std::size_t j = i; !seen[j]; j = perm[j]) {
            seen[j] = true;
            ++len;
        }
        if (len % 2 == 0) sign = -sign;
    }
    return sign;
}

std::vector<int> sortedKey(std::vector<int> v) {
    std::sort(v.begin(), v.end());
    return v;
}

}  // namespace

int SimplicialComplexMesh::dimension() const {
    int d = 0;
    for (std::size_t i = 0; i < simplices.size(); ++i)
        if (!simplices[i].empty()) d = static_cast<int>(i) + 1;
    return d;
}

void SimplicialComplexMesh::validate() const {
    if (numVertices <= 0)
        throw std::invalid_argument("SimplicialComplexMesh: no vertices");
    std::vector<std::map<std::vector<int>, int>> byKey(simplices.size());
    for (std::size_t d = 0; d < simplices.size(); ++d) {
        for (std::size_t s = 0; s < simplices[d].size(); ++s) {
            const auto& verts = simplices[d][s];
            if (verts.size() != d + 2)
                throw std::invalid_argument("SimplicialComplexMesh: wrong vertex count");
            for (int v : verts)
                if (v < 0 || v >= numVertices)
                    throw std::invalid_argument("SimplicialComplexMesh: vertex out of range");
            auto key = sortedKey(verts);
            if (std::adjacent_find(key.begin(), key.end()) != key.end())
                throw std::invalid_argument("SimplicialComplexMesh: repeated vertex");
            if (!byKey[d].emplace(key, static_cast<int>(s)).second)
                throw std::invalid_argument("SimplicialComplexMesh: duplicate simplex");
        }
    }
    for (std::size_t d = 1; d < simplices.size(); ++d) {
        for (const auto& verts : simplices[d]) {
            for (std::size_t skip = 0; skip < verts.size(); ++skip) {
                std::vector<int> face;
                for (std::size_t t = 0; t < verts.size(); ++t)
                    if (t != skip) face.push_back(verts[t]);
                if (!byKey[d - 1].count(sortedKey(face)))
                    throw std::invalid_argument(
                        "SimplicialComplexMesh: a face of a simplex is missing");
            }
        }
    }
}

SimplicialComplexMesh SimplicialComplexMesh::fromFile(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return parse(in, path);
}

SimplicialComplexMesh SimplicialComplexMesh::parse(std::istream& in, const std::string& label) {
    SimplicialComplexMesh mesh;
    std::string line;
    bool haveVertices = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line[0] == '#') continue;
        std::istringstream ls(line);
        std::string first;
        if (!(ls >> first)) continue;
        if (first == "vertices") {
            if (!(ls >> mesh.numVertices) || mesh.numVertices <= 0)
                throw std::runtime_error(label + ": bad vertex count");
            haveVertices = true;
            continue;
        }
        std::vector<int> verts;
        try {
            verts.push_back(std::stoi(first));
        } catch (const std::exception&) {
            throw std::runtime_error(label + ": bad simplex line '" + line + "'");
        }
        int v;
        while (ls >> v) verts.push_back(v);
        if (verts.size() < 2)
            throw std::runtime_error(label + ": simplices need at least two vertices");
        const std::size_t d = verts.size() - 2;
        if (mesh.simplices.size() <= d) mesh.simplices.resize(d + 1);
        mesh.simplices[d].push_back(std::move(verts));
    }
    if (!haveVertices) throw std::runtime_error(label + ": missing 'vertices' line");
    mesh.validate();
    return mesh;
}

HilbertComplex buildFormsComplex(const SimplicialComplexMesh& mesh, FormsFlavor flavor,
                                 double tol) {
    mesh.validate();
    const int n = mesh.dimension();

    // Counts and sorted-key lookup per simplex dimension (0..n).
    std::vector<int> counts(n + 1, 0);
    counts[0] = mesh.numVertices;
    std::vector<std::map<std::vector<int>, int>> index(n + 1);
    for (int v = 0; v < mesh.numVertices; ++v) index[0][{v}] = v;
    for (int d = 1; d <= n; ++d) {
        const auto& list = mesh.simplices[d - 1];
        counts[d] = static_cast<int>(list.size());
        for (int s = 0; s < counts[d]; ++s) index[d][sortedKey(list[s])] = s;
    }

    // Coboundaries d_k = boundary_{k+1}^T as signed integer incidence.
    std::vector<Matrix> cob;
    for (int d = 0; d < n; ++d) {
        Matrix m = Matrix::Zero(counts[d + 1], counts[d]);
        for (int s = 0; s < counts[d + 1]; ++s) {
            const auto& verts = mesh.simplices[d][s];
            for (std::size_t skip = 0; skip < verts.size(); ++skip) {
                std::vector<int> face;
                for (std::size_t t = 0; t < verts.size(); ++t)
                    if (t != skip) face.push_back(verts[t]);
                const int f = index[d].at(sortedKey(face));
                int sign = (skip % 2 == 0) ? 1 : -1;
                if (d >= 1)
                    sign *= permutationSign(face, mesh.simplices[d - 1][f]);
                m(s, f) += sign;
            }
        }
        cob.push_back(std::move(m));
    }

    // Oriented incidence must square to exactly zero.
    for (int d = 0; d + 1 < n; ++d) {
        Matrix prod = cob[d + 1] * cob[d];
        if (prod.size() != 0 && prod.cwiseAbs().maxCoeff() != 0.0)
            throw std::invalid_argument(
                "buildFormsComplex: inconsistent orientations (dd != 0)");
    }

    std::vector<InnerProductSpace> spaces;
    for (int d = 0; d <= n; ++d) spaces.emplace_back(counts[d]);
    std::vector<LinearMap> maps;
    for (int d = 0; d < n; ++d) maps.emplace_back(spaces[d], spaces[d + 1], cob[d]);
    HilbertComplex neumann(std::move(spaces), std::move(maps), tol);
    return flavor == FormsFlavor::Neumann ? neumann : neumann.dual();
}

}  // namespace hilco
