#include "permatch/config.hpp"

#include <charconv>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace permatch {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

std::string unquote(std::string_view s) {
  s = trim(s);
  if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front())
    return std::string(s.substr(1, s.size() - 2));
  return std::string(s);
}

std::string_view strip_comment(std::string_view line) {
  char quote = 0;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quote != 0) {
      if (c == quote)
        quote = 0;
    } else if (c == '"' || c == '\'') {
      quote = c;
    } else if (c == '#') {
      return line.substr(0, i);
    }
  }
  return line;
}

// Splits on commas outside quotes.
std::vector<std::string_view> split_fields(std::string_view s) {
  std::vector<std::string_view> out;
  char quote = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    if (quote != 0) {
      if (c == quote)
        quote = 0;
    } else if (c == '"' || c == '\'') {
      quote = c;
    } else if (c == ',') {
      out.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  out.push_back(s.substr(start));
  return out;
}

double to_double(const std::string& key, const std::string& value) {
  double x = 0.0;
  const char* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, x);
  if (ec != std::errc() || ptr != end)
    throw std::invalid_argument("config: " + key + " expects a number, got '" + value + "'");
  return x;
}

std::uint64_t to_unsigned(const std::string& key, const std::string& value) {
  std::uint64_t x = 0;
  const char* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, x);
  if (ec != std::errc() || ptr != end)
    throw std::invalid_argument("config: " + key + " expects a non-negative integer, got '" +
                                value + "'");
  return x;
}

bool to_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1")
    return true;
  if (value == "false" || value == "0")
    return false;
  throw std::invalid_argument("config: " + key + " expects true or false");
}

std::string number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

} // namespace

std::map<std::string, std::string> parse_key_values(std::string_view text) {
  std::map<std::string, std::string> out;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    line = trim(strip_comment(line));
    if (line.empty())
      continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos)
      throw std::invalid_argument("config line " + std::to_string(line_no) + ": expected key = value");
    const std::string key(trim(line.substr(0, eq)));
    std::string_view value = trim(line.substr(eq + 1));
    if (key.empty())
      throw std::invalid_argument("config line " + std::to_string(line_no) + ": empty key");
    if (!value.empty() && value.front() == '{') {
      if (value.back() != '}')
        throw std::invalid_argument("config line " + std::to_string(line_no) + ": unclosed table");
      for (std::string_view field : split_fields(value.substr(1, value.size() - 2))) {
        field = trim(field);
        if (field.empty())
          continue;
        const std::size_t feq = field.find('=');
        if (feq == std::string_view::npos)
          throw std::invalid_argument("config line " + std::to_string(line_no) +
                                      ": table entries need key = value");
        out[key + "." + std::string(trim(field.substr(0, feq)))] = unquote(field.substr(feq + 1));
      }
    } else {
      out[key] = unquote(value);
    }
  }
  return out;
}

EperpfFamily family_from_keys(const std::map<std::string, std::string>& keys) {
  const auto get = [&](const char* name) -> std::string {
    auto it = keys.find(std::string("prior.") + name);
    if (it == keys.end())
      throw std::invalid_argument(std::string("config: prior needs ") + name);
    return it->second;
  };
  const std::string family = get("family");
  if (family == "dirichlet")
    return EperpfFamily::dirichlet(to_double("prior.theta", get("theta")));
  if (family == "normalized_stable")
    return EperpfFamily::normalized_stable(to_double("prior.discount", get("discount")));
  if (family == "pitman_yor")
    return EperpfFamily::pitman_yor(to_double("prior.theta", get("theta")),
                                    to_double("prior.discount", get("discount")));
  if (family == "gnedin")
    return EperpfFamily::gnedin(to_double("prior.gamma", get("gamma")));
  throw std::invalid_argument("config: unknown prior family '" + family + "'");
}

SamplerConfig parse_sampler_config(std::string_view text) {
  const auto keys = parse_key_values(text);
  SamplerConfig c;
  bool has_prior = false;
  for (const auto& [key, value] : keys) {
    if (key.rfind("prior.", 0) == 0) {
      has_prior = true;
      continue;
    }
    if (key == "n_iter")
      c.n_iter = to_unsigned(key, value);
    else if (key == "burn_in")
      c.burn_in = to_unsigned(key, value);
    else if (key == "thin")
      c.thin = to_unsigned(key, value);
    else if (key == "seed")
      c.seed = to_unsigned(key, value);
    else if (key == "a0")
      c.hyper.a0 = to_double(key, value);
    else if (key == "b0")
      c.hyper.b0 = to_double(key, value);
    else if (key == "a1")
      c.hyper.a1 = to_double(key, value);
    else if (key == "b1")
      c.hyper.b1 = to_double(key, value);
    else if (key == "a_xi")
      c.hyper.a_xi = to_double(key, value);
    else if (key == "b_xi")
      c.hyper.b_xi = to_double(key, value);
    else if (key == "theta_hyperprior")
      c.theta_hyperprior = to_bool(key, value);
    else if (key == "theta_shape")
      c.theta_shape = to_double(key, value);
    else if (key == "theta_rate")
      c.theta_rate = to_double(key, value);
    else if (key == "check_period")
      c.check_period = to_unsigned(key, value);
    else if (key == "init")
      c.init = parse_init_mode(value);
    else if (key == "init_sweeps")
      c.init_sweeps = to_unsigned(key, value);
    else if (key == "save_parent")
      c.save_parent = to_bool(key, value);
    else
      throw std::invalid_argument("config: unknown key '" + key + "'");
  }
  if (has_prior)
    c.family = family_from_keys(keys);
  c.validate();
  return c;
}

std::string format_sampler_config(const SamplerConfig& c) {
  std::ostringstream out;
  out << "n_iter = " << c.n_iter << "\n"
      << "burn_in = " << c.burn_in << "\n"
      << "thin = " << c.thin << "\n"
      << "seed = " << c.seed << "\n"
      << "prior = " << c.family.to_config_string() << "\n"
      << "a0 = " << number(c.hyper.a0) << "\n"
      << "b0 = " << number(c.hyper.b0) << "\n"
      << "a1 = " << number(c.hyper.a1) << "\n"
      << "b1 = " << number(c.hyper.b1) << "\n"
      << "a_xi = " << number(c.hyper.a_xi) << "\n"
      << "b_xi = " << number(c.hyper.b_xi) << "\n"
      << "theta_hyperprior = " << (c.theta_hyperprior ? "true" : "false") << "\n"
      << "theta_shape = " << number(c.theta_shape) << "\n"
      << "theta_rate = " << number(c.theta_rate) << "\n"
      << "check_period = " << c.check_period << "\n"
      << "init = \"" << to_string(c.init) << "\"\n"
      << "init_sweeps = " << c.init_sweeps << "\n"
      << "save_parent = " << (c.save_parent ? "true" : "false") << "\n";
  return out.str();
}

std::uint64_t fnv1a_hash(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

} // namespace permatch
