#include "ergokit/series.hpp"

#include <cmath>

#include "ergokit/errors.hpp"
#include "ergokit/io.hpp"

namespace ergokit {

SeriesRecord::SeriesRecord(std::string label_, std::vector<double> t_,
                           std::vector<double> value_)
    : label(std::move(label_)), t(std::move(t_)), value(std::move(value_)) {
    if (label.empty()) throw DomainError("SeriesRecord: empty label");
    if (t.size() != value.size())
        throw DomainError("SeriesRecord '" + label + "': " + std::to_string(t.size()) +
                          " times vs " + std::to_string(value.size()) + " values");
    if (t.empty()) throw DomainError("SeriesRecord '" + label + "': empty series");
    for (std::size_t k = 0; k + 1 < t.size(); ++k)
        if (!(t[k] < t[k + 1]))
            throw DomainError("SeriesRecord '" + label +
                              "': time grid must be strictly increasing");
    for (double tv : t)
        if (!std::isfinite(tv))
            throw DomainError("SeriesRecord '" + label + "': non-finite time");
}

void write_series_csv(const SeriesRecord& s, const std::string& path) {
    std::string out = "# label: " + s.label + "\nt,value\n";
    for (std::size_t k = 0; k < s.size(); ++k)
        out += format_double(s.t[k]) + "," + format_double(s.value[k]) + "\n";
    write_file(path, out);
}

SeriesRecord read_series_csv(const std::string& path) {
    const std::string text = read_file(path);
    std::string label;
    std::vector<double> t, v;
    std::size_t pos = 0;
    bool header_seen = false;
    while (pos < text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string::npos) nl = text.size();
        std::string_view line(text.data() + pos, nl - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        pos = nl + 1;
        if (line.empty()) continue;
        if (line.rfind("# label:", 0) == 0) {
            std::string_view rest = line.substr(8);
            while (!rest.empty() && rest.front() == ' ') rest.remove_prefix(1);
            label = std::string(rest);
            continue;
        }
        if (line.front() == '#') continue;
        if (!header_seen) {
            header_seen = true;  // "t,value"
            continue;
        }
        const std::size_t comma = line.find(',');
        if (comma == std::string_view::npos)
            throw DomainError("series CSV '" + path + "': malformed row");
        t.push_back(parse_double(line.substr(0, comma)));
        v.push_back(parse_double(line.substr(comma + 1)));
    }
    if (label.empty()) throw DomainError("series CSV '" + path + "': missing label");
    return SeriesRecord(std::move(label), std::move(t), std::move(v));
}

}  // namespace ergokit
