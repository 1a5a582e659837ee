#pragma once

#include <map>
#include <string>

#include "bessched/env.hpp"
#include "bessched/grad_opt.hpp"
#include "bessched/sac.hpp"
#include "bessched/system.hpp"
#include "bessched/uncertainty.hpp"

namespace bessched {

// Flat key-value configuration: one `key = value` pair per line, `#` starts a
// comment. Keys are namespaced per module (grad_opt.tol, env.alpha_p, ...).
class KvConfig {
public:
    static KvConfig from_file(const std::string& path);
    static KvConfig from_string(const std::string& text);

    bool has(const std::string& key) const;
    std::string get_str(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    long get_long(const std::string& key, long fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    void set(const std::string& key, const std::string& value);

    const std::map<std::string, std::string>& entries() const { return entries_; }

private:
    std::map<std::string, std::string> entries_;
};

BatteryParams battery_from(const KvConfig& kv);
GridParams grid_from(const KvConfig& kv);
GradOptConfig grad_config_from(const KvConfig& kv);
EnvConfig env_config_from(const KvConfig& kv);
SacConfig sac_config_from(const KvConfig& kv);
DistSpec dist_spec_from(const KvConfig& kv);

}  // namespace bessched
