// csv.hpp — analysis output tables: '#' metadata lines, one header row, LF line endings

#pragma once

#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <string>
#include <vector>

#include "floquet_ef/types.hpp"

namespace floquet_ef {

class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::vector<std::string>& metadata, const std::vector<std::string>& header)
        : path_(path), columns_(header.size()), os_(path, std::ios::binary | std::ios::trunc) {
        if (!os_) throw Error("cannot open " + path + " for writing");
        for (const auto& m : metadata) os_ << "# " << m << '\n';
        for (std::size_t i = 0; i < header.size(); ++i) os_ << (i ? "," : "") << header[i];
        os_ << '\n';
        os_.flush();
    }

    /// Writes one row and flushes it, so partially completed sweeps stay on disk.
    void row(const std::vector<double>& values) {
        if (values.size() != columns_) throw Error(path_ + ": row width does not match header");
        char buf[32];
        for (std::size_t i = 0; i < values.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%.12g", values[i]);
            if (i) os_ << ',';
            os_ << buf;
        }
        os_ << '\n';
        os_.flush();
        if (!os_) throw Error("failed writing " + path_);
    }

    const std::string& path() const { return path_; }

private:
    std::string path_;
    std::size_t columns_;
    std::ofstream os_;
};

}  // namespace floquet_ef
