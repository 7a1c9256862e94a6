#pragma once

// File formats for records and result series.
//
// CSV record: a mandatory header row of channel labels, then one row per
// sample with one column per channel. A leading column named `time` is
// accepted and ignored. Blank lines are skipped; line numbers in errors are
// physical (1-based, header is line 1).
//
// Binary record: the 4 bytes `PSYN`, then little-endian u32 r, u32 N,
// u32 reserved (written as 0), then r*N little-endian IEEE-754 doubles in
// row-major order (all of channel 0, then channel 1, ...). Labels are not
// stored; channels read back as ch1..chr.
//
// Series CSV: header `t,value`, one row per point.

#include <algorithm>
#include <array>
#include <bit>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "peaksync/error.hpp"
#include "peaksync/record.hpp"

namespace peaksync {

namespace detail {

/// 17 significant digits: reads back bit-exact.
inline std::string format_double(double v) {
    std::array<char, 64> buf{};
    auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 17);
    return std::string(buf.data(), res.ptr);
}

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

inline std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const auto comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            out.push_back(trim(line.substr(start)));
            return out;
        }
        out.push_back(trim(line.substr(start, comma - start)));
        start = comma + 1;
    }
}

inline double parse_number(std::string_view cell, std::size_t line_no, std::size_t column) {
    if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (ec != std::errc() || ptr != cell.data() + cell.size() || cell.empty()) {
        throw ParseError("line " + std::to_string(line_no) + ", column " + std::to_string(column) +
                         ": '" + std::string(cell) + "' is not a number");
    }
    return v;
}

inline bool is_time_column(std::string_view label) {
    if (label.size() != 4) return false;
    std::string lower(label);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return lower == "time";
}

inline std::ifstream open_in(const std::string& path, std::ios::openmode mode = std::ios::in) {
    std::ifstream in(path, mode);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    return in;
}

inline std::ofstream open_out(const std::string& path, std::ios::openmode mode = std::ios::out) {
    std::ofstream out(path, mode | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    return out;
}

inline void finish(std::ofstream& out, const std::string& path) {
    out.flush();
    if (!out) throw IoError("write to '" + path + "' failed");
}

inline void put_u32(std::ostream& out, std::uint32_t v) {
    const std::array<char, 4> b{static_cast<char>(v & 0xFF), static_cast<char>((v >> 8) & 0xFF),
                                static_cast<char>((v >> 16) & 0xFF), static_cast<char>((v >> 24) & 0xFF)};
    out.write(b.data(), 4);
}

inline std::uint64_t load_le(const unsigned char* p, int bytes) {
    std::uint64_t v = 0;
    for (int i = bytes - 1; i >= 0; --i) v = (v << 8) | p[i];
    return v;
}

}  // namespace detail

inline constexpr std::array<char, 4> kBinaryMagic{'P', 'S', 'Y', 'N'};

/// Parse a CSV record from text already in memory.
inline MultiChannelRecord parse_record_csv(std::istream& in, double sample_rate_hz) {
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::string> labels;
    bool skip_time = false;
    bool have_header = false;
    std::vector<std::vector<double>> rows;

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (detail::trim(line).empty()) continue;
        auto fields = detail::split_fields(line);
        if (!have_header) {
            have_header = true;
            skip_time = detail::is_time_column(fields.front());
            for (std::size_t i = skip_time ? 1 : 0; i < fields.size(); ++i) labels.emplace_back(fields[i]);
            continue;
        }
        const std::size_t expected = labels.size() + (skip_time ? 1 : 0);
        if (fields.size() != expected) {
            throw ParseError("line " + std::to_string(line_no) + ": expected " + std::to_string(expected) +
                             " fields, found " + std::to_string(fields.size()));
        }
        std::vector<double> row;
        row.reserve(labels.size());
        for (std::size_t i = skip_time ? 1 : 0; i < fields.size(); ++i)
            row.push_back(detail::parse_number(fields[i], line_no, i + 1));
        rows.push_back(std::move(row));
    }
    if (!have_header) throw ValidationError("record has zero channels (no header row)");

    Matrix samples(labels.size(), rows.size());
    for (std::size_t t = 0; t < rows.size(); ++t)
        for (std::size_t k = 0; k < labels.size(); ++k) samples(k, t) = rows[t][k];
    return {std::move(labels), std::move(samples), sample_rate_hz};
}

inline MultiChannelRecord read_record_csv(const std::string& path, double sample_rate_hz) {
    auto in = detail::open_in(path);
    return parse_record_csv(in, sample_rate_hz);
}

inline void write_record_csv(const std::string& path, const MultiChannelRecord& record) {
    auto out = detail::open_out(path);
    const auto& labels = record.labels();
    for (std::size_t k = 0; k < labels.size(); ++k) out << (k ? "," : "") << labels[k];
    out << '\n';
    std::string row;
    for (std::size_t t = 0; t < record.sample_count(); ++t) {
        row.clear();
        for (std::size_t k = 0; k < record.channel_count(); ++k) {
            if (k) row += ',';
            row += detail::format_double(record.samples()(k, t));
        }
        row += '\n';
        out << row;
    }
    detail::finish(out, path);
}

inline MultiChannelRecord read_record_binary(const std::string& path, double sample_rate_hz) {
    auto in = detail::open_in(path, std::ios::in | std::ios::binary);
    std::array<unsigned char, 16> header{};
    if (!in.read(reinterpret_cast<char*>(header.data()), header.size()))
        throw ParseError("'" + path + "': truncated binary header");
    if (!std::equal(kBinaryMagic.begin(), kBinaryMagic.end(), header.begin()))
        throw ParseError("'" + path + "': bad magic, expected PSYN");
    const auto r = static_cast<std::size_t>(detail::load_le(header.data() + 4, 4));
    const auto n = static_cast<std::size_t>(detail::load_le(header.data() + 8, 4));

    Matrix samples(r, n);
    std::vector<unsigned char> bytes(r * n * 8);
    if (!bytes.empty() && !in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size())))
        throw ParseError("'" + path + "': payload shorter than r*N doubles");
    if (in.peek() != std::char_traits<char>::eof())
        throw ParseError("'" + path + "': trailing bytes after r*N doubles");
    for (std::size_t i = 0; i < r * n; ++i)
        samples(i / n, i % n) = std::bit_cast<double>(detail::load_le(bytes.data() + 8 * i, 8));

    std::vector<std::string> labels;
    for (std::size_t k = 0; k < r; ++k) labels.push_back("ch" + std::to_string(k + 1));
    return {std::move(labels), std::move(samples), sample_rate_hz};
}

inline void write_record_binary(const std::string& path, const MultiChannelRecord& record) {
    auto out = detail::open_out(path, std::ios::out | std::ios::binary);
    out.write(kBinaryMagic.data(), 4);
    detail::put_u32(out, static_cast<std::uint32_t>(record.channel_count()));
    detail::put_u32(out, static_cast<std::uint32_t>(record.sample_count()));
    detail::put_u32(out, 0);
    std::array<char, 8> b{};
    for (double v : record.samples().data()) {
        const auto bits = std::bit_cast<std::uint64_t>(v);
        for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((bits >> (8 * i)) & 0xFF);
        out.write(b.data(), 8);
    }
    detail::finish(out, path);
}

inline bool has_binary_extension(const std::string& path) {
    return path.size() >= 4 && path.compare(path.size() - 4, 4, ".bin") == 0;
}

/// Reads `.bin` files as binary, everything else as CSV.
inline MultiChannelRecord read_record(const std::string& path, double sample_rate_hz) {
    return has_binary_extension(path) ? read_record_binary(path, sample_rate_hz)
                                      : read_record_csv(path, sample_rate_hz);
}

inline void write_record(const std::string& path, const MultiChannelRecord& record) {
    if (has_binary_extension(path))
        write_record_binary(path, record);
    else
        write_record_csv(path, record);
}

inline void write_series(const std::string& path, std::span<const std::int64_t> t_index,
                         std::span<const double> values) {
    detail::require(t_index.size() == values.size(), "series index and values differ in length");
    auto out = detail::open_out(path);
    out << "t,value\n";
    for (std::size_t i = 0; i < values.size(); ++i)
        out << t_index[i] << ',' << detail::format_double(values[i]) << '\n';
    detail::finish(out, path);
}

struct Series {
    std::vector<std::int64_t> t;
    std::vector<double> values;
};

inline Series read_series(const std::string& path) {
    auto in = detail::open_in(path);
    std::string line;
    std::size_t line_no = 0;
    Series s;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line_no == 1 || detail::trim(line).empty()) continue;
        const auto fields = detail::split_fields(line);
        if (fields.size() != 2)
            throw ParseError("line " + std::to_string(line_no) + ": expected 2 fields");
        s.t.push_back(static_cast<std::int64_t>(detail::parse_number(fields[0], line_no, 1)));
        s.values.push_back(detail::parse_number(fields[1], line_no, 2));
    }
    return s;
}

}  // namespace peaksync
