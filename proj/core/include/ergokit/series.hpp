#pragma once

#include <string>
#include <vector>

namespace ergokit {

// A labeled scalar time series with a strictly increasing time grid. The
// CSV form is "# label: <label>" followed by a "t,value" header and rows.
struct SeriesRecord {
    std::string label;
    std::vector<double> t;
    std::vector<double> value;

    SeriesRecord() = default;
    SeriesRecord(std::string label_, std::vector<double> t_, std::vector<double> value_);

    std::size_t size() const { return t.size(); }
};

void write_series_csv(const SeriesRecord& s, const std::string& path);
SeriesRecord read_series_csv(const std::string& path);

}  // namespace ergokit
