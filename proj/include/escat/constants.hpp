#pragma once

// CODATA 2018 values, SI unless noted.
namespace escat::constants {

inline constexpr double c_m_per_s = 299792458.0;
inline constexpr double electron_mass_kg = 9.1093837015e-31;
inline constexpr double elementary_charge_C = 1.602176634e-19;
inline constexpr double hbar_J_s = 1.054571817e-34;
inline constexpr double epsilon0_F_per_m = 8.8541878128e-12;
inline constexpr double fine_structure_alpha = 7.2973525693e-3;
inline constexpr double thomson_cross_section_m2 = 6.6524587321e-29;

inline constexpr double electron_mc_kg_m_per_s = electron_mass_kg * c_m_per_s;
inline constexpr double joule_per_eV = elementary_charge_C;
inline constexpr double hc_eV_nm = 1239.8419843320026;
// hbar/(m_e c): converts between meters and the m_e c momentum unit.
inline constexpr double compton_reduced_m = hbar_J_s / electron_mc_kg_m_per_s;

}  // namespace escat::constants
