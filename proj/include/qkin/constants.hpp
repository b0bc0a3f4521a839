#ifndef QKIN_CONSTANTS_HPP
#define QKIN_CONSTANTS_HPP

#include <stdexcept>
#include <string>

namespace qkin {

enum class UnitSystem { Natural, SI };

// Single source of truth for physical constants across all modules.
struct PhysicalConstants {
    double hbar;  // action
    double c;     // speed
    double k_B;   // energy / temperature

    static PhysicalConstants natural() { return {1.0, 1.0, 1.0}; }

    // CODATA 2018 exact SI values.
    static PhysicalConstants si() {
        return {1.054571817e-34,  // hbar = h / (2 pi), J s
                2.99792458e8,     // c, m/s
                1.380649e-23};    // k_B, J/K
    }

    static PhysicalConstants for_system(UnitSystem u) {
        return u == UnitSystem::SI ? si() : natural();
    }
};

inline UnitSystem parse_unit_system(const std::string& s) {
    if (s == "natural") return UnitSystem::Natural;
    if (s == "SI" || s == "si") return UnitSystem::SI;
    throw std::invalid_argument("unknown unit system: " + s);
}

}  // namespace qkin

#endif
