#pragma once

#include <functional>

#include "qdcd/counterdiabatic.hpp"
#include "qdcd/hamiltonians.hpp"
#include "qdcd/state.hpp"

namespace qdcd {

enum class BlockKind { Mixer, Problem, CounterDiabatic };

/// One exponential of a theta-weighted generator sum. `slot_of[g]` maps
/// generator g to a parameter slot local to the block; grouped blocks give
/// several generators the same slot. `param_offset` is the block's base in
/// the global parameter vector.
struct AnsatzBlock {
  BlockKind kind = BlockKind::Mixer;
  std::vector<TermSum> generators;
  std::vector<int> slot_of;
  int n_slots = 0;
  int param_offset = 0;
};

/// Layered variational circuit. Blocks are stored in application order
/// (rightmost factor of the written product first). Parameter numbering
/// follows the written order per layer: mixer angle, problem angle, then CD
/// slots, so that theta = (theta_1, theta_2, ...) reads like the formula.
struct Ansatz {
  int d = 0;
  int n_sites = 0;
  int layers = 0;
  int n_params = 0;
  std::vector<AnsatzBlock> blocks;
  std::vector<std::pair<double, double>> init_range;  // per parameter
};

enum class InitialStateKind { MixerGround, Uniform };

/// Tensor power of the minimal-eigenvalue eigenvector of Lx (the mixer
/// ground state), phase-fixed so the first nonzero component is positive.
/// The uniform superposition is available as an alternative.
StateVector initial_state(int n_sites, int d,
                          InitialStateKind kind = InitialStateKind::MixerGround);

/// Per layer: exp(-i theta_1 H0) exp(-i theta_2 HP), applied problem-first.
Ansatz build_qaoa(const TermSum& h0, const TermSum& hp, int layers);

/// Per layer: mixer and problem blocks plus one CD block exp(-i sum_k
/// theta_k P_k); one slot per pool element, or per group when grouped.
/// Fresh slots every layer.
Ansatz build_dcqaoa(const TermSum& h0, const TermSum& hp, const CDPool& pool,
                    int layers, const ParamGroupMap* groups = nullptr);

/// Impulse-regime ansatz: one CD block per layer, nothing else.
Ansatz build_cd_ansatz(const CDPool& pool, int layers,
                       const ParamGroupMap* groups = nullptr);

enum class BindMode {
  Exact,            // one exact exponential of the summed generator per block
  ProductFirstOrder  // per-term exponentials (introduces intra-layer Trotter
                     // error; for scalability experiments only)
};

StateVector bind_evolve(const Ansatz& a, const Eigen::VectorXd& theta,
                        const StateVector& psi0,
                        BindMode mode = BindMode::Exact);

using AlphaFn = std::function<CDCoefficients(double lambda)>;

/// First-order Trotterized counterdiabatic anneal: per step at t = j dt the
/// per-term exponentials of (1-lambda) h0, lambda hp, and lambda_dot *
/// sum_k alpha_k(lambda) B_k are applied in that fixed order. A null
/// alphas_fn turns the CD drive off (plain digitized anneal).
StateVector trotter_evolve(const TermSum& h0, const TermSum& hp,
                           const CDPool& pool, const AlphaFn& alphas_fn,
                           const Schedule& schedule, int n_steps,
                           const StateVector& psi0);
StateVector trotter_evolve(const TermSum& h0, const TermSum& hp,
                           const CDPool& pool, const AlphaFn& alphas_fn,
                           const Schedule& schedule, int n_steps);

}  // namespace qdcd
