#pragma once

namespace cascade {

// Units: energies in µeV, times in ns, temperatures in K.
struct PhysConstants {
    static constexpr double hbar = 0.6582119569; // µeV·ns
    static constexpr double kB = 86.17333;       // µeV/K
    static constexpr double h = 4.135667696;     // µeV·ns
};

} // namespace cascade
