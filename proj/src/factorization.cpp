#include "hilco/factorization.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "hilco/mmio.hpp"

namespace hilco {

FactorizedSolver::FactorizedSolver(SkewBlockOperator op) : op_(std::move(op)) {}

std::shared_ptr<const FactorizedSolver::ComponentFactor>
FactorizedSolver::componentFactor(int k, double tau) const {
    const auto key = std::make_pair(k, tau);
    {
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = componentCache_.find(key);
        if (it != componentCache_.end()) return it->second;
    }
    const ProductSpace& ps = op_.space();
    const Matrix& sub = op_.subBlock(k);      // a_k at block (k+1,k)
    const Matrix& super = op_.superBlock(k);  // -/+ a_k^* at block (k,k+1)
    const int up = ps.slotDim(k + 1);
    Matrix schur = tau * tau * Matrix::Identity(up, up) - sub * super;
    auto factor = std::make_shared<ComponentFactor>();
    factor->schur = Eigen::PartialPivLU<Matrix>(schur);
    std::lock_guard<std::mutex> lock(mutex_);
    auto [it, inserted] = componentCache_.emplace(key, std::move(factor));
    (void)inserted;  // concurrent loser reuses the stored entry
    return it->second;
}

std::shared_ptr<const Eigen::PartialPivLU<Matrix>>
FactorizedSolver::directFactor(double tau) const {
    {
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = directCache_.find(tau);
        if (it != directCache_.end()) return it->second;
    }
    const int n = op_.space().totalDim;
    Matrix system = tau * Matrix::Identity(n, n) + op_.sumEntries();
    auto factor = std::make_shared<Eigen::PartialPivLU<Matrix>>(system);
    std::lock_guard<std::mutex> lock(mutex_);
    auto [it, inserted] = directCache_.emplace(tau, std::move(factor));
    (void)inserted;
    return it->second;
}

Vector FactorizedSolver::componentResolvent(int k, double tau, const Vector& b) const {
    if (!(tau > 0.0)) throw std::invalid_argument("componentResolvent: tau must be positive");
    if (b.size() != op_.space().totalDim)
        throw std::invalid_argument("componentResolvent: dimension mismatch");
    const ProductSpace& ps = op_.space();
    // (tau + S_k) acts as tau * I outside blocks k, k+1; inside,
    //   [tau   B] [x]   [p]            B = -/+ a_k^*
    //   [A   tau] [y] = [q]            A = a_k
    // eliminates to (tau^2 - A B) y = tau q - A p, x = (p - B y) / tau.
    Vector out = b / tau;
    const int lo = ps.offsets[k], dLo = ps.slotDim(k);
    const int hi = ps.offsets[k + 1], dHi = ps.slotDim(k + 1);
    if (dLo == 0 && dHi == 0) return out;
    const Matrix& sub = op_.subBlock(k);
    const Matrix& super = op_.superBlock(k);
    Vector p = b.segment(lo, dLo);
    Vector q = b.segment(hi, dHi);
    auto factor = componentFactor(k, tau);
    Vector y = factor->schur.solve(tau * q - sub * p);
    out.segment(hi, dHi) = y;
    out.segment(lo, dLo) = (p - super * y) / tau;
    return out;
}

Vector FactorizedSolver::factoredResolvent(double tau, const Vector& b) const {
    std::vector<int> order;
    for (int k = 0; k < op_.partCount(); ++k) order.push_back(k);
    return factoredResolvent(tau, b, order);
}

Vector FactorizedSolver::factoredResolvent(double tau, const Vector& b,
                                           const std::vector<int>& order) const {
    if (!(tau > 0.0)) throw std::invalid_argument("factoredResolvent: tau must be positive");
    if (static_cast<int>(order.size()) != op_.partCount())
        throw std::invalid_argument("factoredResolvent: order must list every component");
    Vector x = b;
    for (int k : order) x = componentResolvent(k, tau, x);
    const int N = op_.partCount();
    return std::pow(tau, N - 1) * x;
}

Vector FactorizedSolver::directResolvent(double tau, const Vector& b) const {
    if (!(tau > 0.0)) throw std::invalid_argument("directResolvent: tau must be positive");
    return directFactor(tau)->solve(b);
}

Vector FactorizedSolver::recoverComponentResolvent(int l, double tau, const Vector& b) const {
    if (l < 0 || l >= op_.partCount())
        throw std::invalid_argument("recoverComponentResolvent: component out of range");
    Vector x = directResolvent(tau, b);
    for (int k = 0; k < op_.partCount(); ++k) {
        if (k == l) continue;
        x = x + op_.partEntries(k) * x / tau;
    }
    return x;
}

Trajectory evolve(const SkewBlockOperator& op, const EvolutionProblem& problem) {
    const int n = op.space().totalDim;
    if (problem.initialState.size() != n)
        throw std::invalid_argument("evolve: state dimension mismatch");
    if (!(problem.stepSize > 0.0)) throw std::invalid_argument("evolve: step must be positive");
    if (problem.stepCount < 0) throw std::invalid_argument("evolve: negative step count");

    const double h = problem.stepSize;
    const InnerProductSpace& whole = op.space().whole;
    FactorizedSolver solver(op);

    // Cayley step matrices share one factorization.
    std::unique_ptr<Eigen::PartialPivLU<Matrix>> cayleyLu;
    Matrix cayleyForward;
    if (problem.scheme == EvolutionScheme::Cayley) {
        Matrix minus = Matrix::Identity(n, n) - (h / 2.0) * op.sumEntries();
        cayleyForward = Matrix::Identity(n, n) + (h / 2.0) * op.sumEntries();
        cayleyLu = std::make_unique<Eigen::PartialPivLU<Matrix>>(minus);
    }

    auto force = [&](double t) -> Vector {
        if (!problem.forcing) return Vector::Zero(n);
        Vector f = problem.forcing(t);
        if (f.size() != n) throw std::invalid_argument("evolve: forcing dimension mismatch");
        return f;
    };

    Trajectory traj;
    Vector u = problem.initialState;
    traj.times.push_back(0.0);
    traj.energies.push_back(whole.norm(u));
    traj.states.push_back(u);

    for (int step = 0; step < problem.stepCount; ++step) {
        const double t = step * h;
        switch (problem.scheme) {
            case EvolutionScheme::MonolithicImplicitEuler:
                // u+ = (I + h S)^{-1} (u + h f(t+h)); forcing at step end.
                u = solver.directResolvent(1.0 / h, (u + h * force(t + h)) / h);
                break;
            case EvolutionScheme::FactoredImplicitEuler:
                u = solver.factoredResolvent(1.0 / h, (u + h * force(t + h)) / h);
                break;
            case EvolutionScheme::Cayley:
                // Midpoint forcing, second-order consistent.
                u = cayleyLu->solve(cayleyForward * u + h * force(t + h / 2.0));
                break;
        }
        traj.times.push_back(t + h);
        traj.energies.push_back(whole.norm(u));
        traj.states.push_back(u);
    }
    return traj;
}

void writeTrajectory(const std::string& path, const Trajectory& traj) {
    std::ostringstream out;
    out << "# step time energy\n";
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        char buf[80];
        std::snprintf(buf, sizeof(buf), "%zu %.17g %.17g\n", i, traj.times[i],
                      traj.energies[i]);
        out << buf;
    }
    atomicWriteFile(path, out.str());
}

}  // namespace hilco
