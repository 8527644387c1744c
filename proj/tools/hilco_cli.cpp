// Command-line front end: build, verify and decompose complexes, run the
// factorization checks and time stepping, and emit JSON reports.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hilco/annihilating.hpp"
#include "hilco/complexes.hpp"
#include "hilco/derham.hpp"
#include "hilco/factorization.hpp"
#include "hilco/manifest.hpp"
#include "hilco/mmio.hpp"
#include "hilco/simplicial.hpp"

using json = nlohmann::ordered_json;
using namespace hilco;
namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitComplexFail = 2;
constexpr int kExitEquivalenceBug = 3;
constexpr std::uint64_t kDefaultSeed = 12345;

struct CommonOpts {
    double tol = kDefaultRankTol;
    std::uint64_t seed = kDefaultSeed;
    std::string out;
    std::string format = "json";
};

void addCommon(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--tol", opts.tol, "rank/residual tolerance")
        ->check(CLI::Range(1e-16, 1.0));
    cmd->add_option("--seed", opts.seed, "seed for randomized inputs");
    cmd->add_option("--out", opts.out, "output file (reports) or directory (builders)");
    cmd->add_option("--format", opts.format, "report format")
        ->check(CLI::IsMember({"json"}));
}

void emitReport(const CommonOpts& opts, const json& doc) {
    std::string text = doc.dump(2) + "\n";
    if (opts.out.empty()) {
        std::cout << text;
    } else {
        atomicWriteFile(opts.out, text);
    }
}

json baseReport(const std::string& command) {
    json doc;
    doc["schema_version"] = kManifestSchemaVersion;
    doc["command"] = command;
    return doc;
}

std::vector<int> parseIntList(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
    return out;
}

std::vector<double> parseDoubleList(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
    return out;
}

json certificateJson(const AnnihilationCertificate& cert) {
    json doc;
    doc["pass"] = cert.pass;
    doc["tol"] = cert.tol;
    doc["max_commutator_residual"] = cert.maxCommutatorResidual;
    json pairs = json::array();
    for (const auto& pr : cert.pairs) {
        pairs.push_back({{"k", pr.k + 1},
                         {"l", pr.l + 1},
                         {"residual", pr.residual},
                         {"scale", pr.scale},
                         {"pass", pr.pass}});
    }
    doc["pairs"] = pairs;
    return doc;
}

json validationJson(const ValidationReport& rep) {
    json doc;
    doc["pass"] = rep.pass;
    doc["closed"] = rep.closed;
    doc["residuals"] = rep.residuals;
    doc["scales"] = rep.scales;
    std::vector<bool> pairPass(rep.pairPass.begin(), rep.pairPass.end());
    doc["pair_pass"] = pairPass;
    return doc;
}

HilbertComplex loadComplex(const std::string& path, double tol) {
    HilbertComplex cx = readComplexManifest(path);
    if (tol != kDefaultRankTol) {
        std::vector<InnerProductSpace> spaces;
        std::vector<LinearMap> maps;
        for (int s = 0; s < cx.slots(); ++s) spaces.push_back(cx.space(s));
        for (int k = 0; k < cx.length(); ++k) maps.push_back(cx.map(k));
        return HilbertComplex(std::move(spaces), std::move(maps), tol);
    }
    return cx;
}

GridDomain3D loadGrid(const std::string& gridFile, const std::string& box, double h) {
    if (!box.empty()) {
        auto dims = parseIntList(box);
        if (dims.size() != 3) throw std::runtime_error("--box needs nx,ny,nz");
        return GridDomain3D::fullBox(dims[0], dims[1], dims[2], h);
    }
    if (gridFile.empty()) throw std::runtime_error("need a voxel file or --box");
    return readVoxelGrid(gridFile, h);
}

int cmdVerify(const CommonOpts& opts, const std::string& manifest) {
    HilbertComplex cx = loadComplex(manifest, opts.tol);
    EquivalenceReport rep = equivalenceCheck(cx);
    json doc = baseReport("verify");
    doc["input"] = manifest;
    doc["complex_holds"] = rep.complexHolds;
    doc["annihilation_holds"] = rep.annihilationHolds;
    doc["agree"] = rep.agree;
    doc["validation"] = validationJson(rep.validation);
    doc["certificate"] = certificateJson(rep.certificate);
    emitReport(opts, doc);
    if (!rep.agree) return kExitEquivalenceBug;
    if (!rep.complexHolds) return kExitComplexFail;
    return kExitOk;
}

int cmdBuildDeRham(const CommonOpts& opts, const std::string& gridFile,
                   const std::string& box, double h, const std::string& bcName,
                   const std::string& gamma0, const std::string& epsList,
                   const std::string& muList, double nu, double kappa,
                   const std::string& name) {
    GridDomain3D grid = loadGrid(gridFile, box, h);
    BoundaryConditionSpec bc;
    if (bcName == "dirichlet") {
        bc = BoundaryConditionSpec::dirichlet();
    } else if (bcName == "neumann") {
        bc = BoundaryConditionSpec::neumann();
    } else {
        bc = BoundaryConditionSpec::mixed(gamma0FromSides(grid, gamma0));
    }
    MaterialWeights weights;
    if (!epsList.empty()) {
        auto v = parseDoubleList(epsList);
        if (v.size() != 3) throw std::runtime_error("--eps needs three diagonal values");
        weights.eps.diagonal() << v[0], v[1], v[2];
    }
    if (!muList.empty()) {
        auto v = parseDoubleList(muList);
        if (v.size() != 3) throw std::runtime_error("--mu needs three diagonal values");
        weights.mu.diagonal() << v[0], v[1], v[2];
    }
    weights.nu = nu;
    weights.kappa = kappa;
    HilbertComplex cx = buildDeRham(grid, bc, weights, opts.tol);
    std::string dir = opts.out.empty() ? "." : opts.out;
    std::string manifest = writeComplexManifest(dir, name, cx);
    json doc = baseReport("build-derham");
    doc["manifest"] = manifest;
    json dims = json::array();
    for (int s = 0; s < cx.slots(); ++s) dims.push_back(cx.space(s).dim());
    doc["dims"] = dims;
    std::cout << doc.dump(2) << "\n";
    return kExitOk;
}

int cmdBuildForms(const CommonOpts& opts, const std::string& meshFile,
                  const std::string& bcName, const std::string& name) {
    SimplicialComplexMesh mesh = SimplicialComplexMesh::fromFile(meshFile);
    FormsFlavor flavor =
        bcName == "dirichlet" ? FormsFlavor::Dirichlet : FormsFlavor::Neumann;
    HilbertComplex cx = buildFormsComplex(mesh, flavor, opts.tol);
    std::string dir = opts.out.empty() ? "." : opts.out;
    std::string manifest = writeComplexManifest(dir, name, cx);
    json doc = baseReport("build-forms");
    doc["manifest"] = manifest;
    json dims = json::array();
    for (int s = 0; s < cx.slots(); ++s) dims.push_back(cx.space(s).dim());
    doc["dims"] = dims;
    std::cout << doc.dump(2) << "\n";
    return kExitOk;
}

int cmdRandomComplex(const CommonOpts& opts, const std::string& dimsList,
                     const std::string& ranksList, bool withGrams,
                     const std::string& name) {
    HilbertComplex cx = HilbertComplex::random(parseIntList(dimsList),
                                               parseIntList(ranksList), opts.seed,
                                               withGrams, opts.tol);
    std::string dir = opts.out.empty() ? "." : opts.out;
    std::string manifest = writeComplexManifest(dir, name, cx);
    json doc = baseReport("random-complex");
    doc["manifest"] = manifest;
    doc["seed"] = opts.seed;
    std::cout << doc.dump(2) << "\n";
    return kExitOk;
}

int cmdHodge(const CommonOpts& opts, const std::string& manifest, int slot,
             const std::string& vecFile, const std::string& outDir) {
    HilbertComplex cx = loadComplex(manifest, opts.tol);
    if (!cx.isComplex()) return kExitComplexFail;
    Vector x = readVectorMarket(vecFile);
    if (slot < 0 || slot >= cx.slots()) throw std::runtime_error("slot out of range");
    if (x.size() != cx.space(slot).dim())
        throw std::runtime_error("vector does not match the slot dimension");
    HodgeParts parts = cx.hodgeDecompose(slot, x);
    std::string dir = outDir.empty() ? "." : outDir;
    fs::create_directories(dir);
    writeVectorMarket((fs::path(dir) / "exact.mtx").string(), parts.exact);
    writeVectorMarket((fs::path(dir) / "harmonic.mtx").string(), parts.harmonic);
    writeVectorMarket((fs::path(dir) / "coexact.mtx").string(), parts.coexact);
    const InnerProductSpace& h = cx.space(slot);
    double nx = h.norm(x) + 1;
    json doc = baseReport("hodge");
    doc["slot"] = slot;
    doc["reconstruction_residual"] =
        h.norm(x - parts.exact - parts.harmonic - parts.coexact) / nx;
    doc["orthogonality_residuals"] = {
        std::abs(h.inner(parts.exact, parts.harmonic)) / (nx * nx),
        std::abs(h.inner(parts.exact, parts.coexact)) / (nx * nx),
        std::abs(h.inner(parts.harmonic, parts.coexact)) / (nx * nx)};
    doc["norms"] = {h.norm(parts.exact), h.norm(parts.harmonic), h.norm(parts.coexact)};
    emitReport(opts, doc);
    return kExitOk;
}

int cmdBetti(const CommonOpts& opts, const std::string& manifest) {
    HilbertComplex cx = loadComplex(manifest, opts.tol);
    if (!cx.isComplex()) return kExitComplexFail;
    json doc = baseReport("betti");
    doc["dims"] = bettiNumbers(cx);
    emitReport(opts, doc);
    return kExitOk;
}

int cmdPoincare(const CommonOpts& opts, const std::string& manifest) {
    HilbertComplex cx = loadComplex(manifest, opts.tol);
    if (!cx.isComplex()) return kExitComplexFail;
    SkewBlockOperator op = buildBlockOperator(cx);
    json doc = baseReport("poincare");
    doc["constant"] = poincareConstant(op, opts.tol);
    json parts = json::array();
    for (int k = 0; k < op.partCount(); ++k) {
        if (op.partEntries(k).cwiseAbs().maxCoeff() == 0.0) {
            parts.push_back(nullptr);
        } else {
            parts.push_back(poincareConstantOfPart(op, k, opts.tol));
        }
    }
    doc["part_constants"] = parts;
    emitReport(opts, doc);
    return kExitOk;
}

int cmdFredholm(const CommonOpts& opts, const std::string& manifest) {
    HilbertComplex cx = loadComplex(manifest, opts.tol);
    if (!cx.isComplex()) return kExitComplexFail;
    FredholmReport rep = fredholmReport(buildBlockOperator(cx), opts.tol);
    json doc = baseReport("fredholm");
    doc["dim_ker"] = rep.dimKer;
    doc["dim_coker"] = rep.dimCoker;
    doc["index"] = rep.index;
    doc["decomposition_holds"] = rep.decompositionHolds;
    doc["orthogonality_residual"] = rep.orthogonalityResidual;
    emitReport(opts, doc);
    return kExitOk;
}

int cmdProductTable(const CommonOpts& opts, const std::string& manifest) {
    HilbertComplex cx = loadComplex(manifest, opts.tol);
    ProductTable table = appendixProductTable(buildBlockOperator(cx), opts.tol);
    json doc = baseReport("product-table");
    doc["parts"] = table.parts;
    doc["tol"] = table.tol;
    json products = json::array();
    for (int k = 0; k < table.parts; ++k) {
        for (int l = 0; l < table.parts; ++l) {
            json blocks = json::array();
            for (const auto& b : table.blocks[k][l])
                blocks.push_back(
                    {{"row", b.row + 1}, {"col", b.col + 1}, {"magnitude", b.magnitude}});
            products.push_back({{"k", k + 1}, {"l", l + 1}, {"blocks", blocks}});
        }
    }
    doc["products"] = products;
    emitReport(opts, doc);
    return kExitOk;
}

int cmdFactorCheck(const CommonOpts& opts, const std::string& manifest,
                   const std::string& tauList, int rhsCount) {
    HilbertComplex cx = loadComplex(manifest, opts.tol);
    SkewBlockOperator op = buildBlockOperator(cx);
    bool annihilates = verifyAnnihilating(op).pass;
    FactorizedSolver solver(op);
    const int n = op.space().totalDim;
    std::mt19937_64 rng(opts.seed);
    std::normal_distribution<double> gauss;
    double worstFactored = 0, worstRecovered = 0, worstPermuted = 0;
    std::vector<int> forward(op.partCount()), reversed;
    for (int k = 0; k < op.partCount(); ++k) forward[k] = k;
    reversed.assign(forward.rbegin(), forward.rend());
    for (double tau : parseDoubleList(tauList)) {
        for (int probe = 0; probe < rhsCount; ++probe) {
            Vector b(n);
            for (int i = 0; i < n; ++i) b(i) = gauss(rng);
            Vector direct = solver.directResolvent(tau, b);
            Vector factored = solver.factoredResolvent(tau, b);
            worstFactored =
                std::max(worstFactored, (factored - direct).norm() / direct.norm());
            Vector permuted = solver.factoredResolvent(tau, b, reversed);
            worstPermuted =
                std::max(worstPermuted, (permuted - factored).norm() / factored.norm());
            for (int l = 0; l < op.partCount(); ++l) {
                Vector recovered = solver.recoverComponentResolvent(l, tau, b);
                Vector component = solver.componentResolvent(l, tau, b);
                worstRecovered = std::max(
                    worstRecovered, (recovered - component).norm() / component.norm());
            }
        }
    }
    json doc = baseReport("factor-check");
    doc["annihilating"] = annihilates;
    doc["max_factored_vs_direct"] = worstFactored;
    doc["max_recovered_vs_component"] = worstRecovered;
    doc["max_order_permutation"] = worstPermuted;
    bool pass = annihilates && worstFactored <= 1e-10 && worstRecovered <= 1e-10 &&
                worstPermuted <= 1e-12;
    doc["pass"] = pass;
    emitReport(opts, doc);
    return pass ? kExitOk : kExitComplexFail;
}

int cmdEvolve(const CommonOpts& opts, const std::string& manifest,
              const std::string& schemeName, double h, int steps,
              const std::string& u0File, const std::string& trajFile) {
    HilbertComplex cx = loadComplex(manifest, opts.tol);
    if (!cx.isComplex()) return kExitComplexFail;
    SkewBlockOperator op = buildBlockOperator(cx);
    const int n = op.space().totalDim;
    EvolutionProblem problem;
    if (u0File.empty()) {
        std::mt19937_64 rng(opts.seed);
        std::normal_distribution<double> gauss;
        problem.initialState = Vector(n);
        for (int i = 0; i < n; ++i) problem.initialState(i) = gauss(rng);
        problem.initialState.normalize();
    } else {
        problem.initialState = readVectorMarket(u0File);
    }
    problem.stepSize = h;
    problem.stepCount = steps;
    if (schemeName == "implicit-euler") {
        problem.scheme = EvolutionScheme::MonolithicImplicitEuler;
    } else if (schemeName == "factored-implicit-euler") {
        problem.scheme = EvolutionScheme::FactoredImplicitEuler;
    } else {
        problem.scheme = EvolutionScheme::Cayley;
    }
    Trajectory traj = evolve(op, problem);
    if (!trajFile.empty()) writeTrajectory(trajFile, traj);
    double drift = 0;
    for (double e : traj.energies)
        drift = std::max(drift, std::abs(e - traj.energies.front()));
    json doc = baseReport("evolve");
    doc["scheme"] = schemeName;
    doc["steps"] = steps;
    doc["step_size"] = h;
    doc["initial_energy"] = traj.energies.front();
    doc["final_energy"] = traj.energies.back();
    doc["max_energy_drift"] = drift;
    emitReport(opts, doc);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hilbert complexes as annihilating block operators"};
    app.require_subcommand(1);

    CommonOpts opts;
    std::string manifest, gridFile, box, bcName = "dirichlet", gamma0, epsList, muList;
    std::string meshFile, name = "complex", dimsList, ranksList, vecFile, outDir;
    std::string tauList = "0.1,1,10", schemeName = "cayley", u0File, trajFile;
    double h = 1.0, nu = 1.0, kappa = 1.0, stepSize = 0.01;
    int slot = 0, rhsCount = 10, steps = 100;
    bool withGrams = false;

    auto* verify = app.add_subcommand("verify", "check the complex and annihilation properties");
    verify->add_option("manifest", manifest)->required();
    addCommon(verify, opts);

    auto* derham = app.add_subcommand("build-derham", "assemble a grid complex");
    derham->add_option("grid", gridFile, "voxel mask file");
    derham->add_option("--box", box, "full box nx,ny,nz instead of a file");
    derham->add_option("--spacing", h, "grid spacing");
    derham->add_option("--bc", bcName)->check(CLI::IsMember({"dirichlet", "neumann", "mixed"}));
    derham->add_option("--gamma0", gamma0, "box sides for the mixed flavor, e.g. x-,z+");
    derham->add_option("--eps", epsList, "diagonal edge weights ex,ey,ez");
    derham->add_option("--mu", muList, "diagonal face weights mx,my,mz");
    derham->add_option("--nu", nu, "vertex weight");
    derham->add_option("--kappa", kappa, "cell weight");
    derham->add_option("--name", name, "manifest base name");
    addCommon(derham, opts);

    auto* forms = app.add_subcommand("build-forms", "assemble a simplicial complex");
    forms->add_option("mesh", meshFile)->required();
    forms->add_option("--bc", bcName)->check(CLI::IsMember({"dirichlet", "neumann"}));
    forms->add_option("--name", name, "manifest base name");
    addCommon(forms, opts);

    auto* random = app.add_subcommand("random-complex", "generate a seeded exact complex");
    random->add_option("--dims", dimsList)->required();
    random->add_option("--ranks", ranksList)->required();
    random->add_flag("--grams", withGrams, "random SPD grams instead of identity");
    random->add_option("--name", name, "manifest base name");
    addCommon(random, opts);

    auto* hodge = app.add_subcommand("hodge", "slot-wise Hodge decomposition");
    hodge->add_option("manifest", manifest)->required();
    hodge->add_option("--slot", slot)->required();
    hodge->add_option("--vec", vecFile)->required();
    hodge->add_option("--parts-dir", outDir, "directory for the component vectors");
    addCommon(hodge, opts);

    auto* betti = app.add_subcommand("betti", "cohomology dimensions");
    betti->add_option("manifest", manifest)->required();
    addCommon(betti, opts);

    auto* poincare = app.add_subcommand("poincare", "Poincare constants of S and its parts");
    poincare->add_option("manifest", manifest)->required();
    addCommon(poincare, opts);

    auto* fredholm = app.add_subcommand("fredholm", "kernel, cokernel and index of S");
    fredholm->add_option("manifest", manifest)->required();
    addCommon(fredholm, opts);

    auto* table = app.add_subcommand("product-table", "nonzero blocks of every S_k S_l");
    table->add_option("manifest", manifest)->required();
    addCommon(table, opts);

    auto* factor = app.add_subcommand("factor-check", "factored vs direct resolvents");
    factor->add_option("manifest", manifest)->required();
    factor->add_option("--tau", tauList, "comma-separated shifts");
    factor->add_option("--rhs", rhsCount, "right-hand sides per shift");
    addCommon(factor, opts);

    auto* evolveCmd = app.add_subcommand("evolve", "time stepping with energy diagnostics");
    evolveCmd->add_option("manifest", manifest)->required();
    evolveCmd->add_option("--scheme", schemeName)
        ->check(CLI::IsMember({"implicit-euler", "factored-implicit-euler", "cayley"}));
    evolveCmd->add_option("--step", stepSize, "step size");
    evolveCmd->add_option("--steps", steps, "step count");
    evolveCmd->add_option("--u0", u0File, "initial state vector file");
    evolveCmd->add_option("--trajectory", trajFile, "columnar trajectory output");
    addCommon(evolveCmd, opts);

    CLI11_PARSE(app, argc, argv);

    try {
        if (verify->parsed()) return cmdVerify(opts, manifest);
        if (derham->parsed())
            return cmdBuildDeRham(opts, gridFile, box, h, bcName, gamma0, epsList,
                                  muList, nu, kappa, name);
        if (forms->parsed()) return cmdBuildForms(opts, meshFile, bcName, name);
        if (random->parsed())
            return cmdRandomComplex(opts, dimsList, ranksList, withGrams, name);
        if (hodge->parsed()) return cmdHodge(opts, manifest, slot, vecFile, outDir);
        if (betti->parsed()) return cmdBetti(opts, manifest);
        if (poincare->parsed()) return cmdPoincare(opts, manifest);
        if (fredholm->parsed()) return cmdFredholm(opts, manifest);
        if (table->parsed()) return cmdProductTable(opts, manifest);
        if (factor->parsed()) return cmdFactorCheck(opts, manifest, tauList, rhsCount);
        if (evolveCmd->parsed())
            return cmdEvolve(opts, manifest, schemeName, stepSize, steps, u0File,
                             trajFile);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
    return kExitIo;
}
