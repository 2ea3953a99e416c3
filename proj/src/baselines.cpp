#include "swipt/baselines.hpp"

#include <array>

namespace swipt
{

namespace
{

constexpr std::array<std::pair<SchemeTag, const char *>, 5> kNames{{
    {SchemeTag::proposed, "proposed"},
    {SchemeTag::perfect_csi, "perfect_csi"},
    {SchemeTag::no_an, "no_an"},
    {SchemeTag::no_cj, "no_cj"},
    {SchemeTag::non_robust, "non_robust"},
}};

} // namespace

const char *to_string(SchemeTag t)
{
    for (const auto &[tag, name] : kNames)
        if (tag == t)
            return name;
    return "?";
}

SchemeTag scheme_from_string(const std::string &s)
{
    for (const auto &[tag, name] : kNames)
        if (s == name)
            return tag;
    throw DomainError("unknown scheme '" + s + "'");
}

std::vector<SchemeTag> all_schemes()
{
    std::vector<SchemeTag> v;
    for (const auto &kv : kNames)
        v.push_back(kv.first);
    return v;
}

ChannelSet design_channels(SchemeTag tag, const ChannelSet &ch)
{
    if (tag == SchemeTag::perfect_csi || tag == SchemeTag::non_robust)
        return ch.with_zero_radii();
    return ch;
}

ChannelSet evaluation_channels(SchemeTag tag, const ChannelSet &ch)
{
    return tag == SchemeTag::perfect_csi ? ch.with_zero_radii() : ch;
}

SpcaResult solve_scheme(SchemeTag tag, const ChannelSet &ch, const NoiseAndEfficiency &noise,
                        const PowerBudget &budget, const SpcaConfig &cfg, std::uint64_t seed)
{
    SpcaConfig c = cfg;
    if (tag == SchemeTag::no_an)
        c.use_an = false;
    if (tag == SchemeTag::no_cj)
        c.use_cj = false;
    return run_spca(design_channels(tag, ch), noise, budget, c, seed);
}

} // namespace swipt
