#include "rngaudit/descriptor.hpp"

#include <map>
#include <set>

#include "rngaudit/error.hpp"

namespace rngaudit {

namespace {

using KeyValues = std::map<std::string, uint128, std::less<>>;

KeyValues parse_key_values(std::string_view body, const std::set<std::string, std::less<>>& allowed,
                           std::string_view family) {
  KeyValues out;
  while (!body.empty()) {
    const auto comma = body.find(',');
    const std::string_view item = body.substr(0, comma);
    body = comma == std::string_view::npos ? std::string_view{} : body.substr(comma + 1);
    if (comma != std::string_view::npos && body.empty()) {
      throw UsageError("descriptor has a trailing comma");
    }

    const auto eq = item.find('=');
    if (eq == std::string_view::npos || eq == 0) {
      throw UsageError("descriptor entry '" + std::string(item) + "' is not key=value");
    }
    const std::string key(item.substr(0, eq));
    if (!allowed.contains(key)) {
      throw UsageError("unknown key '" + key + "' for generator family '" + std::string(family) +
                       "'");
    }
    if (out.contains(key)) throw UsageError("duplicate key '" + key + "' in descriptor");
    out.emplace(key, parse_uint128(item.substr(eq + 1)));
  }
  return out;
}

uint128 value_or(const KeyValues& kv, std::string_view key, uint128 fallback) {
  const auto it = kv.find(key);
  return it == kv.end() ? fallback : it->second;
}

}  // namespace

std::string_view family_name(GeneratorFamily family) {
  switch (family) {
    case GeneratorFamily::kLcg:
      return "lcg";
    case GeneratorFamily::kCombinedLcg:
      return "wh";
    case GeneratorFamily::kReference:
      return "mt";
  }
  return "?";
}

bool looks_like_descriptor(std::string_view text) {
  return text.starts_with("lcg:") || text == "wh" || text.starts_with("wh:") || text == "mt" ||
         text.starts_with("mt:");
}

GeneratorDescriptor parse_descriptor(std::string_view text) {
  const auto colon = text.find(':');
  const std::string_view family = text.substr(0, colon);
  const std::string_view body =
      colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);

  GeneratorDescriptor d;
  if (family == "lcg") {
    const auto kv = parse_key_values(body, {"m", "a", "c", "seed"}, family);
    if (!kv.contains("m") || !kv.contains("a")) {
      throw UsageError("lcg descriptor requires m=<int> and a=<int>");
    }
    d.family = GeneratorFamily::kLcg;
    d.lcg = LcgParams{kv.at("m"), kv.at("a"), value_or(kv, "c", 0), value_or(kv, "seed", 1)};
    d.lcg.validate();
  } else if (family == "wh") {
    const auto kv = parse_key_values(body, {"seed1", "seed2", "seed3"}, family);
    d.family = GeneratorFamily::kCombinedLcg;
    const char* keys[] = {"seed1", "seed2", "seed3"};
    for (std::size_t i = 0; i < 3; ++i) {
      const uint128 s = value_or(kv, keys[i], 1);
      if (s == 0 || s >= kWichmannHillAs183[i].modulus) {
        throw UsageError(std::string("wh ") + keys[i] + " must lie in 1.." +
                         std::to_string(kWichmannHillAs183[i].modulus - 1));
      }
      d.wh_seeds[i] = static_cast<std::uint64_t>(s);
    }
  } else if (family == "mt") {
    const auto kv = parse_key_values(body, {"seed"}, family);
    const uint128 s = value_or(kv, "seed", ReferenceGenerator::kDefaultSeed);
    if (s > 0xffffffffu) throw UsageError("mt seed must fit in 32 bits");
    d.family = GeneratorFamily::kReference;
    d.mt_seed = static_cast<std::uint32_t>(s);
  } else {
    throw UsageError("unknown generator family '" + std::string(family) +
                     "' (expected lcg, wh or mt)");
  }
  return d;
}

std::string to_string(const GeneratorDescriptor& d) {
  switch (d.family) {
    case GeneratorFamily::kLcg:
      return "lcg:m=" + to_string(d.lcg.modulus) + ",a=" + to_string(d.lcg.multiplier) +
             ",c=" + to_string(d.lcg.increment) + ",seed=" + to_string(d.lcg.seed);
    case GeneratorFamily::kCombinedLcg:
      return "wh:seed1=" + std::to_string(d.wh_seeds[0]) + ",seed2=" +
             std::to_string(d.wh_seeds[1]) + ",seed3=" + std::to_string(d.wh_seeds[2]);
    case GeneratorFamily::kReference:
      return "mt:seed=" + std::to_string(d.mt_seed);
  }
  return {};
}

GeneratorDescriptor with_seed(GeneratorDescriptor d, std::uint64_t seed) {
  switch (d.family) {
    case GeneratorFamily::kLcg:
      d.lcg.seed = seed % d.lcg.modulus;
      break;
    case GeneratorFamily::kCombinedLcg:
      for (std::size_t i = 0; i < 3; ++i) {
        d.wh_seeds[i] = 1 + seed % (kWichmannHillAs183[i].modulus - 1);
      }
      break;
    case GeneratorFamily::kReference:
      d.mt_seed = static_cast<std::uint32_t>(seed);
      break;
  }
  return d;
}

Generator make_generator(const GeneratorDescriptor& d) {
  switch (d.family) {
    case GeneratorFamily::kLcg:
      return Generator(Lcg(d.lcg));
    case GeneratorFamily::kCombinedLcg:
      return Generator(CombinedLcg({d.wh_seeds.begin(), d.wh_seeds.end()}));
    case GeneratorFamily::kReference:
      break;
  }
  return Generator(ReferenceGenerator(d.mt_seed));
}

}  // namespace rngaudit
