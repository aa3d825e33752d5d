#include "monwalk_app/output.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

#include "monwalk/errors.hpp"

namespace monwalk::app {

std::string fmt(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

std::string fmt(long long x) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

CsvFile::CsvFile(std::filesystem::path path, std::string_view manifest_hash, const std::vector<std::string>& columns)
    : path_(std::move(path)) {
    body_ += "# monwalk\n# manifest_sha256: ";
    body_ += manifest_hash;
    body_ += "\n# units: ";
    body_ += kUnitsLine;
    body_ += '\n';
    row(columns);
}

CsvFile& CsvFile::row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) body_ += ',';
        body_ += cells[i];
    }
    body_ += '\n';
    return *this;
}

void CsvFile::write() const { write_text(path_, body_); }

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw ConfigError("out", "cannot open '" + path.string() + "' for writing");
    os.write(text.data(), static_cast<std::streamsize>(text.size()));
    os.close();
    if (!os) throw ConfigError("out", "failed writing '" + path.string() + "'");
}

void ensure_directory(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir))
        throw ConfigError("out", "cannot create output directory '" + dir.string() + "'");
}

}  // namespace monwalk::app
