#pragma once

#include <span>
#include <vector>

namespace tlma {

// Static geometry of the two-layer array. All lengths are in carrier
// wavelengths (lambda == 1 internally); the carrier frequency documents the
// wavelength in configs and never enters a formula.
struct ArrayArchitecture {
    int num_subarrays = 1;         // M_S
    int antennas_per_subarray = 1; // M_A
    double region_length = 1.0;    // L, length of the movable region
    double subarray_length = 0.5;  // L_A = alpha * L / M_S
    double alpha = 0.5;            // fraction of the region usable by subarrays

    int total_antennas() const { return num_subarrays * antennas_per_subarray; }

    // Intra-subarray slack beyond the packed half-wavelength grid; zero in
    // the array-wise special case.
    double offset_slack() const { return subarray_length - 0.5 * antennas_per_subarray; }

    static ArrayArchitecture from_alpha(int num_subarrays, int antennas_per_subarray,
                                        double region_length, double alpha);

    // Rigid-subarray special case: subarrays exactly long enough for the
    // half-wavelength grid (L_A = M_A * lambda/2, alpha at its lower bound).
    static ArrayArchitecture array_wise(int num_subarrays, int antennas_per_subarray,
                                        double region_length);

    // Throws std::invalid_argument naming the violated invariant.
    void validate() const;
};

// Decision variables of the two-layer placement: subarray origins q and
// per-subarray relative offsets d. Offsets are stored flat, subarray-major
// (offsets[s * M_A + a] is antenna a of subarray s); this is also the
// coordinate ordering used by the optimizer and by absolute_positions.
// Layouts may be infeasible; feasibility is a predicate, not an invariant.
struct TwoLayerLayout {
    std::vector<double> subarray_origins; // q, size M_S
    std::vector<double> offsets;          // d, size M_S * M_A
};

enum class LayoutConstraint {
    SubarraySpacing, // q_{s+1} - q_s >= L_A
    SubarrayBounds,  // -L/2 <= q_s <= L/2 - L_A
    OffsetBounds,    // lambda/4 <= d_{s,a} <= L_A - lambda/4
    OffsetSpacing,   // d_{s,a+1} - d_{s,a} >= lambda/2
};

const char* to_string(LayoutConstraint c);

struct FeasibilityReport {
    bool feasible = false;
    std::vector<LayoutConstraint> violated;
};

// delta_{s,a} = q_s + d_{s,a}, flattened subarray-major.
std::vector<double> absolute_positions(const TwoLayerLayout& layout,
                                       const ArrayArchitecture& arch);

// Exact comparisons, boundary equality is feasible.
FeasibilityReport check_feasible(const TwoLayerLayout& layout, const ArrayArchitecture& arch);

// Hinge-loss violation measure for the subarray constraints; zero iff the
// spacing and boundary constraints on q all hold.
double subarray_penalty(std::span<const double> origins, const ArrayArchitecture& arch);

// Hinge-loss violation measure for the per-subarray offset constraints; zero
// iff the offset bound and spacing constraints on d all hold.
double antenna_penalty(std::span<const double> offsets, const ArrayArchitecture& arch);

struct Displacement {
    double subarray = 0.0; // C_S: total subarray motor travel
    double antenna = 0.0;  // C_A: total fine-tuning motor travel
    double total() const { return subarray + antenna; }
};

Displacement sum_displacement(const TwoLayerLayout& initial, const TwoLayerLayout& final_layout);

// Deterministic feasible reference layout: subarrays equally spaced over
// [-L/2, L/2 - L_A] (centered when M_S == 1), antennas equally spaced over
// [lambda/4, L_A - lambda/4] (centered when M_A == 1). Displacement costs
// are accounted against this layout.
TwoLayerLayout uniform_initial_layout(const ArrayArchitecture& arch);

// Coordinate-space plumbing. Origins and offsets are themselves the flat
// q-space / d-space vectors; these helpers validate dimensions and convert
// between the flat offset vector and its per-subarray rows.
TwoLayerLayout make_layout(std::vector<double> origins, std::vector<double> offsets,
                           const ArrayArchitecture& arch);
std::vector<double> flatten_offsets(const std::vector<std::vector<double>>& rows,
                                    const ArrayArchitecture& arch);
std::vector<std::vector<double>> offset_rows(const TwoLayerLayout& layout,
                                             const ArrayArchitecture& arch);

}  // namespace tlma
