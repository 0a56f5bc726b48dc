#include "image.hpp"

#include <cmath>
#include <fstream>
#include <string>

#include "error.hpp"

namespace votkit {

namespace {

// Skips whitespace and '#' comments in a PNM header, then reads an integer.
int read_header_int(std::istream& in, const std::filesystem::path& path) {
  int c = in.peek();
  while (c != EOF) {
    if (c == '#') {
      std::string ignored;
      std::getline(in, ignored);
    } else if (std::isspace(c)) {
      in.get();
    } else {
      break;
    }
    c = in.peek();
  }
  int value = 0;
  if (!(in >> value)) raise(ErrorKind::Format, "bad PNM header in " + path.string());
  return value;
}

}  // namespace

Image read_pnm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorKind::Io, "cannot open image " + path.string());
  char magic[2] = {0, 0};
  in.read(magic, 2);
  int channels = 0;
  if (magic[0] == 'P' && magic[1] == '6') channels = 3;
  else if (magic[0] == 'P' && magic[1] == '5') channels = 1;
  else raise(ErrorKind::Format, "unsupported image format (expected P5/P6) in " + path.string());
  const int w = read_header_int(in, path);
  const int h = read_header_int(in, path);
  const int maxval = read_header_int(in, path);
  if (w <= 0 || h <= 0 || maxval != 255) raise(ErrorKind::Format, "unsupported PNM geometry in " + path.string());
  in.get();  // single whitespace before raster
  Image img(w, h, channels);
  in.read(reinterpret_cast<char*>(img.pixels.data()), static_cast<std::streamsize>(img.pixels.size()));
  if (in.gcount() != static_cast<std::streamsize>(img.pixels.size()))
    raise(ErrorKind::Format, "truncated raster in " + path.string());
  return img;
}

void write_pnm(const std::filesystem::path& path, const Image& image) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) raise(ErrorKind::Io, "cannot write image " + path.string());
  out << (image.channels == 3 ? "P6" : "P5") << '\n' << image.width << ' ' << image.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(image.pixels.data()), static_cast<std::streamsize>(image.pixels.size()));
  if (!out) raise(ErrorKind::Io, "failed writing image " + path.string());
}

std::vector<double> to_gray(const Image& image) {
  std::vector<double> gray(static_cast<std::size_t>(image.width) * image.height);
  for (std::size_t i = 0; i < gray.size(); ++i) {
    const std::uint8_t* p = &image.pixels[i * image.channels];
    gray[i] = image.channels == 3 ? 0.299 * p[0] + 0.587 * p[1] + 0.114 * p[2] : p[0];
  }
  return gray;
}

std::vector<std::uint8_t> to_gray8(const Image& image) {
  auto g = to_gray(image);
  std::vector<std::uint8_t> out(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) out[i] = static_cast<std::uint8_t>(std::lround(std::clamp(g[i], 0.0, 255.0)));
  return out;
}

}  // namespace votkit
