#pragma once

#include "asym/game.hpp"

#include <memory>

namespace asym {

/// Budget 3/4 on 2-bit leaves. Opens with P(00) = 1/4. Once Q_odd(0) > 1/2
/// it plays P(11) = 1/2; otherwise once Q_ev(00) > 1/2 it plays P(01) = 1/2.
/// Passes after that.
std::unique_ptr<Strategy> alice_34();

/// Budget 2/3 on 2-bit leaves, in game units. Opens with P(00) = P(10) = 1/9.
/// When Q_odd(0)Q_ev(00) > 1/9 and Q_odd(1)Q_ev(10) > 1/9 it plays 4/9 at 11
/// if Q_odd(0) >= Q_odd(1), else at 01. Passes otherwise.
std::unique_ptr<Strategy> alice_23();

/// Never moves.
std::unique_ptr<Strategy> silent();

/// The semimeasure behind alice_23's game values: each value times 3/2, so
/// the full strategy spends exactly 1.
MassAssignment alice_23_semimeasure(const MassAssignment& game_values);

}  // namespace asym
