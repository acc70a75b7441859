#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace bt {

// FNV-1a over raw bytes; used for scenario digests and output fingerprints
std::uint64_t fnv1a64(std::string_view bytes) noexcept;
std::string hex64(std::uint64_t v);

// shortest round-trip-exact decimal text for a double ("%.17g" trimmed)
std::string format_double(double v);

// Provenance record written next to every command's outputs.  Two runs with
// equal determinism keys produce byte-identical primary outputs; wall-clock
// time is recorded but excluded from the key.
struct RunManifest {
    std::string tool = "branch-target";
    std::string version;
    std::string command;                         // argv joined
    std::string scenario_path;
    std::string scenario_digest;
    std::string scenario_kind;
    std::map<std::string, std::string> params;   // grid, seeds, sizes, ...
    std::vector<std::pair<std::string, std::string>> outputs; // (file, digest)
    int threads = 1;
    double wall_seconds = 0.0;

    std::string determinism_key() const;
    std::string to_json() const; // pretty, stable key order
};

// minimal CSV writer with deterministic float formatting
class CsvWriter {
  public:
    explicit CsvWriter(const std::string& path);
    ~CsvWriter();
    CsvWriter(const CsvWriter&) = delete;
    CsvWriter& operator=(const CsvWriter&) = delete;

    void row(const std::vector<std::string>& cells);
    void close();
    const std::string& path() const { return path_; }

  private:
    std::string path_;
    void* file_; // FILE*
};

std::string read_file_bytes(const std::string& path); // throws InputError
void write_file_bytes(const std::string& path, std::string_view bytes);

} // namespace bt
