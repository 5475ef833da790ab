#include "fbpl/io.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

namespace fbpl::io {

using json = nlohmann::json;

namespace {

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::ofstream open_out(const fs::path& path, std::ios::openmode mode = std::ios::out) {
    std::ofstream out(path, mode | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    }
    return out;
}

void write_raw(const fs::path& path, std::span<const double> values, const std::string& what) {
    require_finite(values, what);
    std::string bytes(values.size() * 4, '\0');
    for (std::size_t i = 0; i < values.size(); ++i) {
        const auto f = static_cast<float>(values[i]);
        if (!std::isfinite(f)) {
            throw ValidationError(what + " value at index " + std::to_string(i) + " overflows float32");
        }
        auto bits = std::bit_cast<std::uint32_t>(f);
        for (int b = 0; b < 4; ++b) {
            bytes[i * 4 + static_cast<std::size_t>(b)] = static_cast<char>((bits >> (8 * b)) & 0xffu);
        }
    }
    auto out = open_out(path, std::ios::binary);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw std::runtime_error("failed writing '" + path.string() + "'");
    }
}

std::vector<double> read_raw(const fs::path& path, std::size_t expected, const std::string& what) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ValidationError("cannot open " + what + " data '" + path.string() + "'");
    }
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (bytes.size() != expected * 4) {
        throw ValidationError(what + " data '" + path.string() + "' has " + std::to_string(bytes.size()) +
                              " bytes, metadata implies " + std::to_string(expected * 4));
    }
    std::vector<double> values(expected);
    for (std::size_t i = 0; i < expected; ++i) {
        std::uint32_t bits = 0;
        for (int b = 0; b < 4; ++b) {
            bits |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[i * 4 + static_cast<std::size_t>(b)]))
                    << (8 * b);
        }
        values[i] = static_cast<double>(std::bit_cast<float>(bits));
    }
    require_finite(values, what);
    return values;
}

void write_sidecar(const fs::path& data_path, const json& meta) {
    auto out = open_out(sidecar_path(data_path));
    out << meta.dump(2) << '\n';
}

json read_sidecar(const fs::path& data_path, const std::string& kind) {
    const fs::path meta_path = sidecar_path(data_path);
    std::ifstream in(meta_path);
    if (!in) {
        throw ValidationError("missing metadata sidecar '" + meta_path.string() + "'");
    }
    json meta;
    try {
        in >> meta;
    } catch (const json::exception& e) {
        throw ValidationError("malformed metadata '" + meta_path.string() + "': " + e.what());
    }
    if (!meta.is_object() || meta.value("kind", std::string()) != kind) {
        throw ValidationError("metadata '" + meta_path.string() + "' does not describe a " + kind);
    }
    return meta;
}

template <typename T>
T get_field(const json& meta, const char* key) {
    if (!meta.contains(key)) {
        throw ValidationError(std::string("metadata is missing '") + key + "'");
    }
    try {
        return meta.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ValidationError(std::string("metadata field '") + key + "' has the wrong type");
    }
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> parts;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, sep)) {
        parts.push_back(item);
    }
    if (!line.empty() && line.back() == sep) {
        parts.emplace_back();
    }
    return parts;
}

double parse_number(const std::string& text, std::size_t line_no) {
    const char* begin = text.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0' || !std::isfinite(v)) {
        throw ValidationError("malformed number '" + text + "' on line " + std::to_string(line_no));
    }
    return v;
}

}  // namespace

fs::path sidecar_path(const fs::path& data_path) {
    fs::path p = data_path;
    p.replace_extension(".meta.json");
    return p;
}

void save_image(const fs::path& path, const Image& img) {
    write_raw(path, img.values(), "image");
    write_sidecar(path, {{"kind", "image"}, {"size", img.grid().size()}, {"spacing", img.grid().spacing()}});
}

Image load_image(const fs::path& path) {
    const json meta = read_sidecar(path, "image");
    const GridSpec grid(get_field<std::size_t>(meta, "size"), get_field<double>(meta, "spacing"));
    return Image(grid, read_raw(path, grid.num_pixels(), "image"));
}

void save_sinogram(const fs::path& path, const Sinogram& sino, std::optional<GridSpec> grid) {
    const ScanGeometry& g = sino.geometry();
    json meta = {{"kind", "sinogram"},
                 {"num_angles", g.num_angles()},
                 {"num_bins", g.num_bins()},
                 {"bin_spacing", g.bin_spacing()},
                 {"pad_length", g.pad_length()}};
    if (grid) {
        meta["grid_size"] = grid->size();
        meta["grid_spacing"] = grid->spacing();
    }
    write_raw(path, sino.values(), "sinogram");
    write_sidecar(path, meta);
}

Sinogram load_sinogram(const fs::path& path) {
    const json meta = read_sidecar(path, "sinogram");
    const ScanGeometry geom(get_field<std::size_t>(meta, "num_angles"), get_field<std::size_t>(meta, "num_bins"),
                            get_field<double>(meta, "bin_spacing"));
    if (get_field<std::size_t>(meta, "pad_length") != geom.pad_length()) {
        throw ValidationError("sinogram metadata pad_length is inconsistent with num_bins");
    }
    return Sinogram(geom, read_raw(path, geom.num_samples(), "sinogram"));
}

std::optional<GridSpec> load_sinogram_grid(const fs::path& path) {
    const json meta = read_sidecar(path, "sinogram");
    if (!meta.contains("grid_size")) {
        return std::nullopt;
    }
    return GridSpec(get_field<std::size_t>(meta, "grid_size"), meta.value("grid_spacing", 1.0));
}

void save_filter(const fs::path& path, const SpectralFilter& filt) {
    auto out = open_out(path);
    out << "k,frequency,coefficient\n";
    const auto n = static_cast<double>(filt.pad_length());
    for (std::size_t k = 0; k < filt.pad_length(); ++k) {
        const std::size_t folded = std::min(k, filt.pad_length() - k);
        const double f = static_cast<double>(folded) / (n * filt.bin_spacing());
        out << k << ',' << format_double(f) << ',' << format_double(filt[k]) << '\n';
    }
}

SpectralFilter load_filter(const fs::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ValidationError("cannot open filter '" + path.string() + "'");
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw ValidationError("filter file '" + path.string() + "' is empty");
    }
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    if (line != "k,frequency,coefficient") {
        throw ValidationError("filter file '" + path.string() + "' has an unexpected header");
    }
    std::vector<double> freqs;
    std::vector<double> coeffs;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        const auto parts = split(line, ',');
        if (parts.size() != 3) {
            throw ValidationError("filter row " + std::to_string(line_no) + " does not have 3 columns");
        }
        const double k = parse_number(parts[0], line_no);
        if (k != static_cast<double>(coeffs.size())) {
            throw ValidationError("filter row " + std::to_string(line_no) + " has bin index out of sequence");
        }
        freqs.push_back(parse_number(parts[1], line_no));
        coeffs.push_back(parse_number(parts[2], line_no));
    }
    const std::size_t n = coeffs.size();
    if (n < 2) {
        throw ValidationError("filter file '" + path.string() + "' has fewer than two rows");
    }
    if (!(freqs[1] > 0.0)) {
        throw ValidationError("filter file '" + path.string() + "' has a non-positive first frequency");
    }
    const double spacing = 1.0 / (static_cast<double>(n) * freqs[1]);
    return SpectralFilter(n, spacing, std::move(coeffs));
}

int window_level(double value, double lo, double hi) {
    const double scaled = std::floor((value - lo) / (hi - lo) * 255.0);
    return static_cast<int>(std::clamp(scaled, 0.0, 255.0));
}

void export_viewable(const fs::path& path, const Image& img, double lo, double hi) {
    if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
        throw ValidationError("viewing window needs finite lo < hi");
    }
    const std::size_t n = img.grid().size();
    auto out = open_out(path);
    out << "P2\n" << n << ' ' << n << "\n255\n";
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            out << window_level(img(i, j), lo, hi) << (j + 1 < n ? ' ' : '\n');
        }
    }
}

void save_diff_stats(const fs::path& path, const std::vector<NamedStats>& rows) {
    auto out = open_out(path);
    out << "name,mean,std. dev.,min,max\n";
    for (const auto& r : rows) {
        out << r.name << ',' << format_double(r.stats.mean) << ',' << format_double(r.stats.std_dev) << ','
            << format_double(r.stats.min) << ',' << format_double(r.stats.max) << '\n';
    }
}

void save_profile(const fs::path& path, const std::vector<ProfilePoint>& profile) {
    auto out = open_out(path);
    out << "x,value\n";
    for (const auto& p : profile) {
        out << format_double(p.x) << ',' << format_double(p.value) << '\n';
    }
}

void save_spectrum(const fs::path& path, const SpectralFilter& filt, const SpectralFilter* compare) {
    if (compare && compare->pad_length() != filt.pad_length()) {
        throw ValidationError("comparison filter has a different pad length");
    }
    auto out = open_out(path);
    out << "k,frequency,coefficient" << (compare ? ",compare" : "") << '\n';
    const auto n = static_cast<double>(filt.pad_length());
    for (std::size_t k = 0; k < filt.pad_length(); ++k) {
        const std::size_t folded = std::min(k, filt.pad_length() - k);
        out << k << ',' << format_double(static_cast<double>(folded) / (n * filt.bin_spacing())) << ','
            << format_double(filt[k]);
        if (compare) {
            out << ',' << format_double((*compare)[k]);
        }
        out << '\n';
    }
}

void save_history(const fs::path& path, const TrainHistory& history) {
    {
        auto out = open_out(path);
        out << "epoch,objective\n";
        out << 0 << ',' << format_double(history.initial_objective) << '\n';
        for (std::size_t e = 0; e < history.epoch_objective.size(); ++e) {
            out << e + 1 << ',' << format_double(history.epoch_objective[e]) << '\n';
        }
    }
    const fs::path dir = path.parent_path();
    const std::string stem = path.stem().string();
    for (std::size_t e = 0; e < history.snapshots.size(); ++e) {
        std::ostringstream name;
        name << stem << "_epoch_" << std::setw(2) << std::setfill('0') << e + 1 << ".csv";
        save_filter(dir / name.str(), history.snapshots[e]);
    }
}

}  // namespace fbpl::io
