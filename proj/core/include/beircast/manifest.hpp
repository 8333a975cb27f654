#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace beircast {

/// Per-stage provenance: hashes of consumed and produced artifacts plus the
/// parameters that shaped them. Stages validate their inputs against the
/// producing stage's recorded output hashes before running.
struct StageRecord {
    std::map<std::string, std::string> inputs;  // path (relative to out dir) -> sha256
    std::map<std::string, std::string> outputs;
    std::map<std::string, std::string> params;
};

class Manifest {
public:
    static Manifest load_or_create(const std::filesystem::path& out_dir,
                                   const std::string& config_hash);

    // Throws DataError when the stored config hash differs (stale pipeline).
    void require_config(const std::string& config_hash) const;

    bool has_stage(const std::string& stage) const { return stages_.count(stage) > 0; }
    const StageRecord& stage(const std::string& stage) const;
    void record_stage(const std::string& stage, StageRecord record);

    // Checks that `relpath` was produced by `producer_stage` and still hashes
    // to the recorded value. Missing stage -> error naming the stage to run;
    // hash mismatch -> stale-pipeline error.
    void verify_input(const std::string& producer_stage, const std::string& relpath) const;

    std::string hash_artifact(const std::string& relpath) const;
    void save() const;

    const std::filesystem::path& out_dir() const { return out_dir_; }

private:
    std::filesystem::path out_dir_;
    std::string config_hash_;
    std::string version_;
    std::map<std::string, StageRecord> stages_;
};

} // namespace beircast
