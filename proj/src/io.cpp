#include "hetamp/io.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hetamp/errors.hpp"

namespace hetamp {

std::string format_double(double v) {
    char buf[32];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, p);
}

void write_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    const fs::path dir = target.parent_path().empty() ? "." : target.parent_path();
    const fs::path tmp = dir / (target.filename().string() + ".tmp");
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ConfigError("cannot open " + tmp.string() + " for writing");
        out << content;
        if (!out) throw ConfigError("write failed for " + tmp.string());
    }
    fs::rename(tmp, target);
}

namespace {

void put_metadata(std::ostringstream& os, const std::map<std::string, std::string>& md) {
    for (const auto& [k, v] : md) os << "# " << k << "=" << v << "\n";
}

} // namespace

std::string density_to_csv(const OutcomeDensity& d,
                           const std::map<std::string, std::string>& metadata) {
    std::ostringstream os;
    auto md = metadata;
    md["method"] = d.method;
    if (d.samples) {
        md["samples"] = std::to_string(d.samples);
        md["seed"] = std::to_string(d.seed);
    }
    put_metadata(os, md);
    os << "u,p\n";
    for (int i = 0; i < d.support.size(); ++i)
        os << format_double(d.support(i)) << "," << format_double(d.density(i)) << "\n";
    return os.str();
}

std::string sample_to_csv(const ComplexOutcomeSample& s) {
    std::ostringstream os;
    os << "# eta=" << format_double(s.eta) << "\n# seed=" << s.seed << "\n";
    os << "re,im\n";
    for (cd v : s.values)
        os << format_double(v.real()) << "," << format_double(v.imag()) << "\n";
    return os.str();
}

std::string columns_to_csv(const std::vector<std::string>& names,
                           const std::vector<Eigen::VectorXd>& columns,
                           const std::map<std::string, std::string>& metadata) {
    if (names.size() != columns.size() || columns.empty())
        throw ConfigError("columns_to_csv: names/columns mismatch");
    const auto rows = columns.front().size();
    for (const auto& c : columns)
        if (c.size() != rows) throw ConfigError("columns_to_csv: ragged columns");
    std::ostringstream os;
    put_metadata(os, metadata);
    for (std::size_t i = 0; i < names.size(); ++i) os << (i ? "," : "") << names[i];
    os << "\n";
    for (Eigen::Index r = 0; r < rows; ++r) {
        for (std::size_t i = 0; i < columns.size(); ++i)
            os << (i ? "," : "") << format_double(columns[i](r));
        os << "\n";
    }
    return os.str();
}

} // namespace hetamp
