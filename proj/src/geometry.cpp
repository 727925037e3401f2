#include "tlma/geometry.hpp"

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>

namespace tlma {

namespace {

double hinge(double x) { return x > 0.0 ? x : 0.0; }

void require_dims(const TwoLayerLayout& layout, const ArrayArchitecture& arch) {
    if (static_cast<int>(layout.subarray_origins.size()) != arch.num_subarrays)
        throw std::invalid_argument("layout has " + std::to_string(layout.subarray_origins.size()) +
                                    " subarray origins, architecture expects " +
                                    std::to_string(arch.num_subarrays));
    if (static_cast<int>(layout.offsets.size()) != arch.total_antennas())
        throw std::invalid_argument("layout has " + std::to_string(layout.offsets.size()) +
                                    " offsets, architecture expects " +
                                    std::to_string(arch.total_antennas()));
}

} // namespace

const char* to_string(LayoutConstraint c) {
    switch (c) {
    case LayoutConstraint::SubarraySpacing: return "subarray_spacing";
    case LayoutConstraint::SubarrayBounds: return "subarray_bounds";
    case LayoutConstraint::OffsetBounds: return "offset_bounds";
    case LayoutConstraint::OffsetSpacing: return "offset_spacing";
    }
    return "unknown";
}

ArrayArchitecture ArrayArchitecture::from_alpha(int num_subarrays, int antennas_per_subarray,
                                                double region_length, double alpha) {
    ArrayArchitecture arch;
    arch.num_subarrays = num_subarrays;
    arch.antennas_per_subarray = antennas_per_subarray;
    arch.region_length = region_length;
    arch.alpha = alpha;
    arch.subarray_length = alpha * region_length / num_subarrays;
    arch.validate();
    return arch;
}

ArrayArchitecture ArrayArchitecture::array_wise(int num_subarrays, int antennas_per_subarray,
                                                double region_length) {
    ArrayArchitecture arch;
    arch.num_subarrays = num_subarrays;
    arch.antennas_per_subarray = antennas_per_subarray;
    arch.region_length = region_length;
    arch.subarray_length = 0.5 * antennas_per_subarray;
    arch.alpha = arch.subarray_length * num_subarrays / region_length;
    arch.validate();
    return arch;
}

void ArrayArchitecture::validate() const {
    if (num_subarrays < 1)
        throw std::invalid_argument("num_subarrays must be positive");
    if (antennas_per_subarray < 1)
        throw std::invalid_argument("antennas_per_subarray must be positive");
    if (!(region_length > 0.0))
        throw std::invalid_argument("region_length must be positive");
    if (!(subarray_length > 0.0))
        throw std::invalid_argument("subarray_length must be positive");
    // alpha is a recorded parameterization of L_A; allow 1 ulp of drift from
    // reconstructed architectures.
    const double expected = alpha * region_length / num_subarrays;
    if (std::abs(expected - subarray_length) > 1e-12 * subarray_length)
        throw std::invalid_argument("subarray_length does not match alpha * L / M_S");
    if (subarray_length < 0.5 * antennas_per_subarray)
        throw std::invalid_argument(
            "subarray_length " + std::to_string(subarray_length) +
            " cannot host " + std::to_string(antennas_per_subarray) +
            " antennas at half-wavelength spacing (needs >= " +
            std::to_string(0.5 * antennas_per_subarray) + ")");
    if (num_subarrays * subarray_length > region_length)
        throw std::invalid_argument("subarrays cannot be packed into the region: M_S * L_A > L");
}

std::vector<double> absolute_positions(const TwoLayerLayout& layout,
                                       const ArrayArchitecture& arch) {
    require_dims(layout, arch);
    std::vector<double> delta(layout.offsets.size());
    const int per = arch.antennas_per_subarray;
    for (int s = 0; s < arch.num_subarrays; ++s)
        for (int a = 0; a < per; ++a)
            delta[s * per + a] = layout.subarray_origins[s] + layout.offsets[s * per + a];
    return delta;
}

FeasibilityReport check_feasible(const TwoLayerLayout& layout, const ArrayArchitecture& arch) {
    require_dims(layout, arch);
    FeasibilityReport report;
    const auto& q = layout.subarray_origins;
    const auto& d = layout.offsets;
    const double len = arch.subarray_length;
    const double half = 0.5 * arch.region_length;
    const int per = arch.antennas_per_subarray;

    bool spacing_ok = true;
    for (std::size_t s = 0; s + 1 < q.size(); ++s)
        spacing_ok = spacing_ok && (q[s + 1] - q[s] >= len);
    if (!spacing_ok) report.violated.push_back(LayoutConstraint::SubarraySpacing);

    bool bounds_ok = true;
    for (double qs : q)
        bounds_ok = bounds_ok && (qs >= -half && qs <= half - len);
    if (!bounds_ok) report.violated.push_back(LayoutConstraint::SubarrayBounds);

    bool offset_bounds_ok = true;
    bool offset_spacing_ok = true;
    for (int s = 0; s < arch.num_subarrays; ++s) {
        for (int a = 0; a < per; ++a) {
            const double v = d[s * per + a];
            offset_bounds_ok = offset_bounds_ok && (v >= 0.25 && v <= len - 0.25);
            if (a + 1 < per)
                offset_spacing_ok = offset_spacing_ok && (d[s * per + a + 1] - v >= 0.5);
        }
    }
    if (!offset_bounds_ok) report.violated.push_back(LayoutConstraint::OffsetBounds);
    if (!offset_spacing_ok) report.violated.push_back(LayoutConstraint::OffsetSpacing);

    report.feasible = report.violated.empty();
    return report;
}

double subarray_penalty(std::span<const double> origins, const ArrayArchitecture& arch) {
    if (static_cast<int>(origins.size()) != arch.num_subarrays)
        throw std::invalid_argument("subarray_penalty: wrong q dimension");
    const double len = arch.subarray_length;
    const double half = 0.5 * arch.region_length;
    double penalty = 0.0;
    for (std::size_t s = 0; s + 1 < origins.size(); ++s)
        penalty += hinge(len - (origins[s + 1] - origins[s]));
    for (double qs : origins)
        penalty += hinge(-half - qs) + hinge(qs - (half - len));
    return penalty;
}

double antenna_penalty(std::span<const double> offsets, const ArrayArchitecture& arch) {
    if (static_cast<int>(offsets.size()) != arch.total_antennas())
        throw std::invalid_argument("antenna_penalty: wrong d dimension");
    const double len = arch.subarray_length;
    const int per = arch.antennas_per_subarray;
    double penalty = 0.0;
    for (int s = 0; s < arch.num_subarrays; ++s) {
        for (int a = 0; a < per; ++a) {
            const double v = offsets[s * per + a];
            penalty += hinge(v - (len - 0.25)) + hinge(0.25 - v);
            if (a + 1 < per)
                penalty += hinge(0.5 - (offsets[s * per + a + 1] - v));
        }
    }
    return penalty;
}

Displacement sum_displacement(const TwoLayerLayout& initial, const TwoLayerLayout& final_layout) {
    if (initial.subarray_origins.size() != final_layout.subarray_origins.size() ||
        initial.offsets.size() != final_layout.offsets.size())
        throw std::invalid_argument("sum_displacement: layout dimensions differ");
    Displacement cost;
    for (std::size_t s = 0; s < initial.subarray_origins.size(); ++s)
        cost.subarray += std::abs(initial.subarray_origins[s] - final_layout.subarray_origins[s]);
    for (std::size_t i = 0; i < initial.offsets.size(); ++i)
        cost.antenna += std::abs(initial.offsets[i] - final_layout.offsets[i]);
    return cost;
}

namespace {

// Feasibility comparisons are exact, so the equally-spaced construction pins
// both interval endpoints and then repairs ulp-level gap shortfalls (which
// only arise within rounding error of a fully packed geometry).
std::vector<double> uniform_chain(double lo, double hi, double min_gap, int count) {
    std::vector<double> points(count);
    if (count == 1) {
        points[0] = 0.5 * (lo + hi); // centering convention
        return points;
    }
    const double step = (hi - lo) / (count - 1);
    for (int i = 0; i < count - 1; ++i)
        points[i] = lo + i * step;
    points[count - 1] = hi;
    for (int i = 1; i < count; ++i) {
        if (points[i] - points[i - 1] >= min_gap) continue;
        points[i] = points[i - 1] + min_gap;
        while (points[i] - points[i - 1] < min_gap)
            points[i] = std::nextafter(points[i], std::numeric_limits<double>::infinity());
    }
    if (points[count - 1] > hi)
        throw std::invalid_argument(
            "architecture is packed too tightly for a uniform feasible layout");
    return points;
}

} // namespace

TwoLayerLayout uniform_initial_layout(const ArrayArchitecture& arch) {
    arch.validate();
    TwoLayerLayout layout;
    const double len = arch.subarray_length;
    const double half = 0.5 * arch.region_length;
    const int subs = arch.num_subarrays;
    const int per = arch.antennas_per_subarray;

    layout.subarray_origins = uniform_chain(-half, half - len, len, subs);
    const std::vector<double> row = uniform_chain(0.25, len - 0.25, 0.5, per);
    layout.offsets.resize(static_cast<std::size_t>(subs) * per);
    for (int s = 0; s < subs; ++s)
        for (int a = 0; a < per; ++a)
            layout.offsets[s * per + a] = row[a];
    return layout;
}

TwoLayerLayout make_layout(std::vector<double> origins, std::vector<double> offsets,
                           const ArrayArchitecture& arch) {
    TwoLayerLayout layout{std::move(origins), std::move(offsets)};
    require_dims(layout, arch);
    return layout;
}

std::vector<double> flatten_offsets(const std::vector<std::vector<double>>& rows,
                                    const ArrayArchitecture& arch) {
    if (static_cast<int>(rows.size()) != arch.num_subarrays)
        throw std::invalid_argument("flatten_offsets: wrong number of subarray rows");
    std::vector<double> flat;
    flat.reserve(arch.total_antennas());
    for (const auto& row : rows) {
        if (static_cast<int>(row.size()) != arch.antennas_per_subarray)
            throw std::invalid_argument("flatten_offsets: wrong row length");
        flat.insert(flat.end(), row.begin(), row.end());
    }
    return flat;
}

std::vector<std::vector<double>> offset_rows(const TwoLayerLayout& layout,
                                             const ArrayArchitecture& arch) {
    require_dims(layout, arch);
    const int per = arch.antennas_per_subarray;
    std::vector<std::vector<double>> rows(arch.num_subarrays);
    for (int s = 0; s < arch.num_subarrays; ++s)
        rows[s].assign(layout.offsets.begin() + static_cast<std::ptrdiff_t>(s) * per,
                       layout.offsets.begin() + static_cast<std::ptrdiff_t>(s + 1) * per);
    return rows;
}

}  // namespace tlma
