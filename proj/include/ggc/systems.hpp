#pragma once

#include <vector>

#include "ggc/channels.hpp"
#include "ggc/ordering.hpp"

namespace ggc {

/// Maximum ratio combining: end-to-end power is the sum of the branch
/// powers. Returns the end-to-end ChannelModel view; its Thorin
/// measure (when derivable) is the sum of the branch measures and its
/// diversity is the sum of branch diversities.
inline ChannelModel mrc(std::vector<ChannelModel> branches) {
    if (branches.size() == 1) return branches.front();
    return ChannelModel(Mrc{std::move(branches)});
}

/// Composite multipath x shadowing channel. Each factor is first
/// normalized to unit average power so the product has unit mean.
inline ChannelModel composite(const ChannelModel& multipath, const ChannelModel& shadow) {
    return ChannelModel(
        Composite{{normalize_unit_power(multipath), normalize_unit_power(shadow)}});
}

/// Convex-order benchmark for a composed system: the unit-mean
/// Nakagami channel with the system's diversity order.
inline ChannelModel system_benchmark(const ChannelModel& system) {
    return nakagami_benchmark(diversity_of(system));
}

}  // namespace ggc
