#ifndef PERMATCH_CONFIG_HPP
#define PERMATCH_CONFIG_HPP

#include "permatch/eperpf.hpp"
#include "permatch/gibbs.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <string_view>

namespace permatch {

/// Flat `key = value` text. Inline tables such as
/// `prior = {family="pitman_yor", theta=1.0, discount=0.3}` are flattened to
/// dotted keys (`prior.family`, ...). Quotes are stripped from string values;
/// `#` starts a comment.
std::map<std::string, std::string> parse_key_values(std::string_view text);

/// Reads a family from `prior.*` entries.
EperpfFamily family_from_keys(const std::map<std::string, std::string>& keys);

/// Starts from the defaults and applies every key; unknown keys throw.
SamplerConfig parse_sampler_config(std::string_view text);
/// Canonical text with every field, readable by parse_sampler_config.
std::string format_sampler_config(const SamplerConfig& config);

/// 64-bit FNV-1a.
std::uint64_t fnv1a_hash(std::string_view text);

} // namespace permatch

#endif
