// Copyright 2026 The rpsbr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <charconv>
#include <fstream>
#include <system_error>

#include "rpsbr/errors.hpp"
#include "rpsbr/scan.hpp"

namespace rpsbr {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

namespace {

std::ofstream open_for_write(const std::string& path, std::ios::openmode mode) {
  std::ofstream out(path, mode);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  return out;
}

void finish(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw IoError("failed while writing '" + path + "'");
}

}  // namespace

void write_csv(const BifurcationScan& scan, std::ostream& out) {
  out << "alpha,lambda,head,tail,count,boundary\n";
  for (std::size_t i = 0; i < scan.lambdas.size(); ++i) {
    out << format_double(scan.alpha) << ',' << format_double(scan.lambdas[i]) << ','
        << scan.heads[i] << ',' << scan.tails[i] << ',' << scan.counts[i] << ','
        << (scan.boundary_flags[i] ? 1 : 0) << '\n';
  }
}

void write_csv(const BifurcationScan& scan, const std::string& path) {
  std::ofstream out = open_for_write(path, std::ios::out | std::ios::trunc);
  write_csv(scan, out);
  finish(out, path);
}

// label is the orbit index k (period 3k), -1 for unresolved cells and -2 for
// cells whose orbit hit an indifference set; period is 0 for both.
void write_csv(const BasinRaster& raster, std::ostream& out) {
  out << "i,j,x1,x2,x3,label,period\n";
  for (int j = 0; j < raster.height; ++j) {
    for (int i = 0; i < raster.width; ++i) {
      const BasinCell& c = raster.at(i, j);
      if (c.kind == CellKind::Outside) continue;
      const auto x = pixel_to_simplex(i, j, raster.width, raster.height);
      int label = -1;
      int period = 0;
      if (c.kind == CellKind::Orbit) {
        label = c.k;
        period = 3 * c.k;
      } else if (c.kind == CellKind::GammaHit) {
        label = -2;
      }
      out << i << ',' << j << ',' << format_double((*x)(0)) << ','
          << format_double((*x)(1)) << ',' << format_double((*x)(2)) << ',' << label << ','
          << period << '\n';
    }
  }
}

void write_csv(const BasinRaster& raster, const std::string& path) {
  std::ofstream out = open_for_write(path, std::ios::out | std::ios::trunc);
  write_csv(raster, out);
  finish(out, path);
}

void write_ppm(const BasinRaster& raster, std::ostream& out, const Palette& palette) {
  out << "P6\n" << raster.width << ' ' << raster.height << "\n255\n";
  std::string row(static_cast<std::size_t>(raster.width) * 3, '\0');
  for (int j = 0; j < raster.height; ++j) {
    for (int i = 0; i < raster.width; ++i) {
      const Rgb c = palette.color(raster.at(i, j));
      row[3 * i] = static_cast<char>(c.r);
      row[3 * i + 1] = static_cast<char>(c.g);
      row[3 * i + 2] = static_cast<char>(c.b);
    }
    out.write(row.data(), static_cast<std::streamsize>(row.size()));
  }
}

void write_ppm(const BasinRaster& raster, const std::string& path, const Palette& palette) {
  std::ofstream out = open_for_write(path, std::ios::out | std::ios::trunc | std::ios::binary);
  write_ppm(raster, out, palette);
  finish(out, path);
}

}  // namespace rpsbr
