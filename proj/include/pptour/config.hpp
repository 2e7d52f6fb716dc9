#pragma once

#include <json.hpp>

#include <string>

#include "pptour/errors.hpp"
#include "pptour/indexes.hpp"
#include "pptour/optimizer.hpp"
#include "pptour/simdata.hpp"

namespace pptour {

using Json = nlohmann::ordered_json;

/// Parsed run configuration. The raw tree is kept verbatim so configs
/// round-trip losslessly through the on-disk format.
struct RunConfig {
    Json raw;

    static RunConfig parse_file(const std::string& path);
    static RunConfig parse_text(const std::string& text);
    std::string serialize() const { return raw.dump(2) + "\n"; }

    std::uint64_t master_seed() const;
    std::string output_dir() const;

    bool has(const std::string& key) const { return raw.contains(key); }
    const Json& at(const std::string& key) const;
};

/// 64-bit fingerprint of the canonicalized config, carried by artifacts.
std::string config_fingerprint(const Json& j);

IndexParams index_params_from_json(const Json& j);
Json index_params_to_json(const IndexParams& p);

IndexDescriptor index_descriptor_from_json(const Json& j);
std::vector<IndexDescriptor> index_list_from_json(const Json& j);

OptimizerConfig optimizer_from_json(const Json& j, const OptimizerConfig& base = {});
Json optimizer_to_json(const OptimizerConfig& cfg);

SimSpec simspec_from_json(const Json& j);
Json simspec_to_json(const SimSpec& s);

} // namespace pptour
