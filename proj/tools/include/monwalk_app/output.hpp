#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace monwalk::app {

// Shortest round-trip decimal form; "inf", "-inf" and "nan" for non-finite values.
std::string fmt(double x);
std::string fmt(long long x);
inline std::string fmt(int x) { return fmt(static_cast<long long>(x)); }
inline std::string fmt(long x) { return fmt(static_cast<long long>(x)); }

inline constexpr std::string_view kUnitsLine = "time in 1/J, rates and energies in J";

// Buffers a CSV with the provenance preamble and writes it in one go.
class CsvFile {
public:
    CsvFile(std::filesystem::path path, std::string_view manifest_hash, const std::vector<std::string>& columns);

    CsvFile& row(const std::vector<std::string>& cells);
    const std::filesystem::path& path() const { return path_; }
    void write() const;

private:
    std::filesystem::path path_;
    std::string body_;
};

// Writes text to path, throwing ConfigError("out", ...) when the file cannot be written.
void write_text(const std::filesystem::path& path, const std::string& text);

void ensure_directory(const std::filesystem::path& dir);

}  // namespace monwalk::app
