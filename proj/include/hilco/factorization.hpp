#ifndef HILCO_FACTORIZATION_HPP
#define HILCO_FACTORIZATION_HPP

#include <Eigen/LU>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "hilco/annihilating.hpp"

// Exact resolvent factorization through the components of an annihilating
// operator, (tau + S)^{-1} = tau^{N-1} prod_k (tau + S_k)^{-1}, component
// resolvent recovery, and evolutionary time stepping with energy
// diagnostics. T is restricted to positive multiples of the identity.

namespace hilco {

class FactorizedSolver {
public:
    explicit FactorizedSolver(SkewBlockOperator op);

    const SkewBlockOperator& op() const { return op_; }

    // (tau + S_k)^{-1} b, solved on the two active blocks through the
    // Schur complement tau^2 + a_k a_k^*; factorizations are cached per
    // (k, tau) and safe for concurrent lookup.
    Vector componentResolvent(int k, double tau, const Vector& b) const;

    // tau^{N-1} (tau + S_N)^{-1} ... (tau + S_1)^{-1} b, optionally in a
    // caller-provided component order (0-based permutation of 0..N-1).
    Vector factoredResolvent(double tau, const Vector& b) const;
    Vector factoredResolvent(double tau, const Vector& b,
                             const std::vector<int>& order) const;

    // Dense reference solve of (tau + S) x = b.
    Vector directResolvent(double tau, const Vector& b) const;

    // (tau + S_l)^{-1} b recovered as prod_{k != l} (1 + S_k/tau) (tau+S)^{-1} b.
    Vector recoverComponentResolvent(int l, double tau, const Vector& b) const;

private:
    SkewBlockOperator op_;
    struct ComponentFactor {
        Eigen::PartialPivLU<Matrix> schur;  // tau^2 I + a_k (a_k)^adj
    };
    mutable std::mutex mutex_;
    mutable std::map<std::pair<int, double>, std::shared_ptr<const ComponentFactor>>
        componentCache_;
    mutable std::map<double, std::shared_ptr<const Eigen::PartialPivLU<Matrix>>>
        directCache_;

    std::shared_ptr<const ComponentFactor> componentFactor(int k, double tau) const;
    std::shared_ptr<const Eigen::PartialPivLU<Matrix>> directFactor(double tau) const;
};

enum class EvolutionScheme { MonolithicImplicitEuler, FactoredImplicitEuler, Cayley };

struct EvolutionProblem {
    Vector initialState;
    // Forcing sampled at the scheme's quadrature time; nullptr means zero.
    std::function<Vector(double)> forcing;
    double stepSize = 0.0;
    int stepCount = 0;
    EvolutionScheme scheme = EvolutionScheme::MonolithicImplicitEuler;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<double> energies;  // gram norms of the states
    std::vector<Vector> states;
};

Trajectory evolve(const SkewBlockOperator& op, const EvolutionProblem& problem);

// Columnar text file: step, time, energy.
void writeTrajectory(const std::string& path, const Trajectory& traj);

}  // namespace hilco

#endif
