#include "tessera/image_io.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

namespace tessera {

std::uint8_t quantize_unit(double v) {
    const double scaled = std::floor((v + 1.0) * 127.5 + 0.5); // round half up
    if (scaled < 0.0) return 0;
    if (scaled > 255.0) return 255;
    return static_cast<std::uint8_t>(scaled);
}

double dequantize_unit(std::uint8_t byte) {
    return static_cast<double>(byte) / 127.5 - 1.0;
}

std::string encode_pnm(const ImageTensor& x) {
    const int channels = x.channels();
    if (channels != 1 && channels != 3)
        throw ConfigError("image output supports 1 or 3 channels, got " +
                          std::to_string(channels));
    std::string out;
    out += channels == 1 ? "P5" : "P6";
    out += "\n" + std::to_string(x.width()) + " " + std::to_string(x.height()) + "\n255\n";
    out.reserve(out.size() + x.size());
    const double* v = x.data();
    for (std::size_t i = 0; i < x.size(); ++i)
        out.push_back(static_cast<char>(quantize_unit(v[i])));
    return out;
}

namespace {

// Next whitespace-delimited header token, skipping '#' comment lines.
std::string next_token(const std::string& bytes, std::size_t& pos) {
    while (pos < bytes.size()) {
        if (std::isspace(static_cast<unsigned char>(bytes[pos]))) {
            ++pos;
        } else if (bytes[pos] == '#') {
            while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
        } else {
            break;
        }
    }
    std::size_t start = pos;
    while (pos < bytes.size() && !std::isspace(static_cast<unsigned char>(bytes[pos]))) ++pos;
    if (start == pos) throw IoError("truncated image header");
    return bytes.substr(start, pos - start);
}

int parse_positive(const std::string& token, const char* what) {
    try {
        std::size_t used = 0;
        const int value = std::stoi(token, &used);
        if (used != token.size() || value < 1) throw std::invalid_argument(token);
        return value;
    } catch (const std::exception&) {
        throw IoError(std::string("bad image header ") + what + ": '" + token + "'");
    }
}

} // namespace

ImageTensor decode_pnm(const std::string& bytes) {
    std::size_t pos = 0;
    const std::string magic = next_token(bytes, pos);
    int channels = 0;
    if (magic == "P5")
        channels = 1;
    else if (magic == "P6")
        channels = 3;
    else
        throw IoError("unsupported image magic '" + magic + "' (want P5 or P6)");
    const int width = parse_positive(next_token(bytes, pos), "width");
    const int height = parse_positive(next_token(bytes, pos), "height");
    const int maxval = parse_positive(next_token(bytes, pos), "maxval");
    if (maxval != 255) throw IoError("unsupported maxval " + std::to_string(maxval));
    if (pos >= bytes.size()) throw IoError("missing pixel data");
    ++pos; // single whitespace byte after maxval

    ImageTensor x(height, width, channels);
    if (bytes.size() - pos < x.size())
        throw IoError("pixel data truncated: need " + std::to_string(x.size()) + " bytes, have " +
                      std::to_string(bytes.size() - pos));
    double* v = x.data();
    for (std::size_t i = 0; i < x.size(); ++i)
        v[i] = dequantize_unit(static_cast<std::uint8_t>(bytes[pos + i]));
    return x;
}

void write_image(const ImageTensor& x, const std::filesystem::path& path) {
    const std::string bytes = encode_pnm(x);
    std::ofstream file(path, std::ios::binary);
    if (!file) throw IoError("cannot open '" + path.string() + "' for writing");
    file.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!file) throw IoError("write failed for '" + path.string() + "'");
}

ImageTensor read_image(const std::filesystem::path& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw IoError("cannot open '" + path.string() + "'");
    std::ostringstream buffer;
    buffer << file.rdbuf();
    return decode_pnm(buffer.str());
}

} // namespace tessera
