#include "branchtarget/report.hpp"

#include "branchtarget/errors.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

namespace bt {

std::uint64_t fnv1a64(std::string_view bytes) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (const unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return std::string(buf);
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
}

std::string RunManifest::determinism_key() const {
    std::ostringstream os;
    os << tool << '|' << version << '|' << command << '|' << scenario_digest << '|'
       << scenario_kind;
    for (const auto& [k, v] : params) os << '|' << k << '=' << v;
    for (const auto& [f, d] : outputs) os << '|' << d;
    return hex64(fnv1a64(os.str()));
}

std::string RunManifest::to_json() const {
    nlohmann::ordered_json j;
    j["tool"] = tool;
    j["version"] = version;
    j["command"] = command;
    j["scenario"] = {{"path", scenario_path}, {"digest", scenario_digest}, {"kind", scenario_kind}};
    nlohmann::ordered_json p = nlohmann::ordered_json::object();
    for (const auto& [k, v] : params) p[k] = v;
    j["params"] = p;
    nlohmann::ordered_json outs = nlohmann::ordered_json::array();
    for (const auto& [f, d] : outputs) outs.push_back({{"file", f}, {"digest", d}});
    j["outputs"] = outs;
    j["threads"] = threads;
    j["determinism_key"] = determinism_key();
    j["wall_seconds"] = wall_seconds; // informational; not part of the key
    return j.dump(2);
}

CsvWriter::CsvWriter(const std::string& path) : path_(path) {
    FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw InputError("cannot open for write: " + path);
    file_ = f;
}

CsvWriter::~CsvWriter() { close(); }

void CsvWriter::row(const std::vector<std::string>& cells) {
    if (!file_) throw InputError("csv writer already closed: " + path_);
    FILE* f = static_cast<FILE*>(file_);
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) std::fputc(',', f);
        std::fwrite(cells[i].data(), 1, cells[i].size(), f);
    }
    std::fputc('\n', f);
}

void CsvWriter::close() {
    if (file_) {
        std::fclose(static_cast<FILE*>(file_));
        file_ = nullptr;
    }
}

std::string read_file_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file_bytes(const std::string& path, std::string_view bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot open for write: " + path);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

} // namespace bt
