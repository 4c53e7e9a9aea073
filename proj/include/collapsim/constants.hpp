#pragma once

namespace collapsim {

// CODATA 2018. The nucleon reference mass is the free neutron mass;
// the proton-neutron spread changes downstream results by <0.2%.
struct PhysicalConstants {
    double hbar = 1.054571817e-34;        // J s
    double k_B = 1.380649e-23;            // J/K
    double m_nucleon = 1.67492749804e-27; // kg
};

inline constexpr double kHbar = 1.054571817e-34;
inline constexpr double kBoltzmann = 1.380649e-23;
inline constexpr double kNucleonMass = 1.67492749804e-27;

} // namespace collapsim
