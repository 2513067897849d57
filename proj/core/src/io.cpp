#include "ergokit/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

#include "ergokit/errors.hpp"
#include "ergokit/measure.hpp"

namespace ergokit {

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

double parse_double(std::string_view text) {
    double v = 0.0;
    const char* b = text.data();
    const char* e = b + text.size();
    const auto res = std::from_chars(b, e, v);
    if (res.ec != std::errc{} || res.ptr != e)
        throw DomainError("parse_double: invalid number '" + std::string(text) + "'");
    return v;
}

std::uint32_t fnv1a32(std::string_view bytes) {
    std::uint32_t h = 2166136261u;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 16777619u;
    }
    return h;
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open file for reading: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return std::move(ss).str();
}

void write_file(const std::string& path, std::string_view contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open file for writing: " + path);
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw Error("short write: " + path);
}

std::uint64_t fnv1a64_file(const std::string& path) { return fnv1a64(read_file(path)); }

void write_measure_csv(const ParticleMeasure& mu, const std::string& path) {
    std::string out = "w";
    for (int i = 1; i <= mu.space().dim(); ++i) out += ",x" + std::to_string(i);
    out += '\n';
    const auto& pts = mu.points();
    const auto& w = mu.weights();
    for (std::size_t k = 0; k < pts.size(); ++k) {
        out += format_double(w[k]);
        for (int i = 0; i < mu.space().dim(); ++i) {
            out += ',';
            out += format_double(pts[k][i]);
        }
        out += '\n';
    }
    write_file(path, out);
}

namespace {

std::vector<std::string_view> split_csv_line(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

}  // namespace

ParticleMeasure read_measure_csv(const std::string& path, const MetricSpaceSpec& space) {
    const std::string text = read_file(path);
    std::vector<Point> points;
    std::vector<double> weights;
    std::vector<double> coords(static_cast<std::size_t>(space.dim()));
    std::size_t pos = 0;
    bool header_seen = false;
    while (pos < text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string::npos) nl = text.size();
        std::string_view line(text.data() + pos, nl - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        pos = nl + 1;
        if (line.empty()) continue;
        if (!header_seen) {
            header_seen = true;  // "w,x1,..." header row
            continue;
        }
        const auto fields = split_csv_line(line);
        if (static_cast<int>(fields.size()) != space.dim() + 1)
            throw DomainError("measure CSV '" + path + "': row has " +
                              std::to_string(fields.size()) + " fields, expected " +
                              std::to_string(space.dim() + 1));
        weights.push_back(parse_double(fields[0]));
        for (int i = 0; i < space.dim(); ++i)
            coords[static_cast<std::size_t>(i)] = parse_double(fields[static_cast<std::size_t>(i) + 1]);
        points.push_back(space.make_point(coords));
    }
    return ParticleMeasure(space, std::move(points), std::move(weights));
}

}  // namespace ergokit
