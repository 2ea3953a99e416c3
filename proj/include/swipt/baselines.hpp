#pragma once

#include <string>
#include <vector>

#include "swipt/spca.hpp"

namespace swipt
{

enum class SchemeTag
{
    proposed,
    perfect_csi,
    no_an,
    no_cj,
    non_robust,
};

const char *to_string(SchemeTag t);
/// Throws DomainError on an unknown name.
SchemeTag scheme_from_string(const std::string &s);
std::vector<SchemeTag> all_schemes();

/// Channels a scheme designs against.
ChannelSet design_channels(SchemeTag tag, const ChannelSet &ch);
/// Channels a scheme's solution is judged against.
ChannelSet evaluation_channels(SchemeTag tag, const ChannelSet &ch);

SpcaResult solve_scheme(SchemeTag tag, const ChannelSet &ch, const NoiseAndEfficiency &noise,
                        const PowerBudget &budget, const SpcaConfig &cfg, std::uint64_t seed);

} // namespace swipt
