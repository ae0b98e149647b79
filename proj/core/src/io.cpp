#include "egogaze/io.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <cstring>
#include <istream>
#include <ostream>
#include <sstream>
#include <string_view>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "egogaze/errors.hpp"

namespace egogaze {

namespace fs = std::filesystem;

namespace {

std::uint32_t load_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void store_u32(unsigned char* p, std::uint32_t v) {
  p[0] = static_cast<unsigned char>(v);
  p[1] = static_cast<unsigned char>(v >> 8);
  p[2] = static_cast<unsigned char>(v >> 16);
  p[3] = static_cast<unsigned char>(v >> 24);
}

float load_f32(const unsigned char* p) {
  const std::uint32_t bits = load_u32(p);
  float f;
  std::memcpy(&f, &bits, sizeof f);
  return f;
}

void store_f32(unsigned char* p, float f) {
  std::uint32_t bits;
  std::memcpy(&bits, &f, sizeof f);
  store_u32(p, bits);
}

std::vector<unsigned char> read_all(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  return bytes;
}

// Next whitespace-delimited PNM header token, skipping '#' comments.
std::string pnm_token(std::istream& in) {
  std::string tok;
  int ch;
  while ((ch = in.get()) != EOF) {
    if (ch == '#') {
      while ((ch = in.get()) != EOF && ch != '\n') {
      }
      continue;
    }
    if (std::isspace(ch)) {
      if (!tok.empty()) break;
      continue;
    }
    tok.push_back(static_cast<char>(ch));
  }
  return tok;
}

int parse_header_int(const std::string& tok, const fs::path& path) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size() || v <= 0) {
    throw IoError(path.string() + ": bad PPM header field '" + tok + "'");
  }
  return v;
}

std::string format_fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    std::string_view field = line.substr(start, comma == std::string_view::npos ? comma : comma - start);
    while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
    while (!field.empty() && (field.back() == ' ' || field.back() == '\t' || field.back() == '\r')) {
      field.remove_suffix(1);
    }
    out.push_back(field);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

template <typename T>
T parse_field(std::string_view field, std::string_view name, std::size_t line) {
  T v{};
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc{} || ptr != field.data() + field.size() || field.empty()) {
    throw SchemaError("invalid " + std::string(name) + " value '" + std::string(field) + "'", line);
  }
  return v;
}

// Reads a CSV file with a header, returning the header and data rows with
// their 1-based line numbers. Blank lines are skipped.
struct CsvFile {
  std::vector<std::string> header;
  std::vector<std::pair<std::size_t, std::string>> rows;
};

CsvFile read_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  CsvFile csv;
  std::string line;
  std::size_t number = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (!have_header) {
      for (auto f : split_csv(line)) csv.header.emplace_back(f);
      have_header = true;
      continue;
    }
    csv.rows.emplace_back(number, line);
  }
  if (!have_header) throw SchemaError(path.string() + ": missing header", 1);
  return csv;
}

std::size_t column(const CsvFile& csv, std::string_view name, const fs::path& path) {
  const auto it = std::find(csv.header.begin(), csv.header.end(), name);
  if (it == csv.header.end()) {
    throw SchemaError(path.string() + ": header lacks column '" + std::string(name) + "'", 1);
  }
  return static_cast<std::size_t>(it - csv.header.begin());
}

}  // namespace

// ---------------------------------------------------------------------------

Frame read_ppm(const fs::path& path, std::int64_t index) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  if (pnm_token(in) != "P6") throw IoError(path.string() + ": not a binary P6 PPM");
  Frame frame;
  frame.index = index;
  frame.width = parse_header_int(pnm_token(in), path);
  frame.height = parse_header_int(pnm_token(in), path);
  if (parse_header_int(pnm_token(in), path) != 255) {
    throw IoError(path.string() + ": only 8-bit PPM (maxval 255) is supported");
  }
  frame.pixels.resize(static_cast<std::size_t>(frame.width) * frame.height * 3);
  in.read(reinterpret_cast<char*>(frame.pixels.data()),
          static_cast<std::streamsize>(frame.pixels.size()));
  if (in.gcount() != static_cast<std::streamsize>(frame.pixels.size())) {
    throw IoError(path.string() + ": truncated pixel data");
  }
  return frame;
}

void write_ppm(const fs::path& path, const Frame& frame) {
  validate_frame(frame);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << "P6\n" << frame.width << ' ' << frame.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(frame.pixels.data()),
            static_cast<std::streamsize>(frame.pixels.size()));
  if (!out) throw IoError("failed writing " + path.string());
}

std::vector<float> read_flo32(const fs::path& path, int width, int height) {
  const auto bytes = read_all(path);
  if (bytes.size() < 8) throw IoError(path.string() + ": truncated flow header");
  const auto w = load_u32(bytes.data());
  const auto h = load_u32(bytes.data() + 4);
  if (static_cast<int>(w) != width || static_cast<int>(h) != height) {
    throw IoError(path.string() + ": flow is " + std::to_string(w) + "x" + std::to_string(h) +
                  ", frame is " + std::to_string(width) + "x" + std::to_string(height));
  }
  const std::size_t count = static_cast<std::size_t>(w) * h * 2;
  if (bytes.size() != 8 + count * 4) throw IoError(path.string() + ": flow payload size mismatch");
  std::vector<float> flow(count);
  for (std::size_t i = 0; i < count; ++i) flow[i] = load_f32(bytes.data() + 8 + i * 4);
  return flow;
}

void write_flo32(const fs::path& path, int width, int height, std::span<const float> flow) {
  const std::size_t count = static_cast<std::size_t>(width) * height * 2;
  if (flow.size() != count) throw FrameError("flow field size does not match " + path.string());
  std::vector<unsigned char> bytes(8 + count * 4);
  store_u32(bytes.data(), static_cast<std::uint32_t>(width));
  store_u32(bytes.data() + 4, static_cast<std::uint32_t>(height));
  for (std::size_t i = 0; i < count; ++i) store_f32(bytes.data() + 8 + i * 4, flow[i]);
  std::ofstream out(path, std::ios::binary);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("failed writing " + path.string());
}

PpmDirectorySource::PpmDirectorySource(const fs::path& dir, std::optional<fs::path> flow_dir)
    : flow_dir_(std::move(flow_dir)) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw IoError("frames directory " + dir.string() + " not found");
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".ppm") {
      files_.push_back(entry.path());
    }
  }
  std::sort(files_.begin(), files_.end(),
            [](const fs::path& a, const fs::path& b) { return a.filename().string() < b.filename().string(); });
}

std::optional<Frame> PpmDirectorySource::next() {
  if (pos_ >= files_.size()) return std::nullopt;
  const fs::path& path = files_[pos_];
  Frame frame = read_ppm(path, static_cast<std::int64_t>(pos_));
  if (pos_ == 0) {
    width_ = frame.width;
    height_ = frame.height;
  } else if (frame.width != width_ || frame.height != height_) {
    throw IoError(path.string() + ": frame " + std::to_string(pos_) + " is " +
                  std::to_string(frame.width) + "x" + std::to_string(frame.height) +
                  ", expected " + std::to_string(width_) + "x" + std::to_string(height_));
  }
  if (flow_dir_) {
    frame.flow = read_flo32(*flow_dir_ / (path.stem().string() + ".flo32"), frame.width, frame.height);
  }
  ++pos_;
  return frame;
}

RawVideoSource::RawVideoSource(std::istream& in, std::optional<fs::path> flow_dir)
    : in_(in), flow_dir_(std::move(flow_dir)) {
  std::string line;
  if (!std::getline(in_, line)) throw IoError("raw stream: missing RAWVIDEO header");
  std::istringstream header(line);
  std::string magic;
  header >> magic >> width_ >> height_ >> fps_;
  if (magic != "RAWVIDEO" || !header || width_ <= 0 || height_ <= 0 || !(fps_ > 0.0)) {
    throw IoError("raw stream: malformed header '" + line + "'");
  }
}

std::optional<Frame> RawVideoSource::next() {
  Frame frame;
  frame.width = width_;
  frame.height = height_;
  frame.index = index_;
  frame.pixels.resize(static_cast<std::size_t>(width_) * height_ * 3);
  in_.read(reinterpret_cast<char*>(frame.pixels.data()),
           static_cast<std::streamsize>(frame.pixels.size()));
  const auto got = in_.gcount();
  if (got == 0) return std::nullopt;
  if (got != static_cast<std::streamsize>(frame.pixels.size())) {
    throw IoError("raw stream: frame " + std::to_string(index_) + " truncated");
  }
  if (flow_dir_) {
    char stem[32];
    std::snprintf(stem, sizeof stem, "%06lld.flo32", static_cast<long long>(index_));
    frame.flow = read_flo32(*flow_dir_ / stem, width_, height_);
  }
  ++index_;
  return frame;
}

void write_rawvideo_header(std::ostream& out, int width, int height, double fps) {
  std::ostringstream fps_text;
  fps_text << fps;
  out << "RAWVIDEO " << width << ' ' << height << ' ' << fps_text.str() << '\n';
}

// ---------------------------------------------------------------------------

std::string format_gaze_row(const GazePrediction& gaze) {
  std::string row = std::to_string(gaze.frame_index);
  row += ',';
  row += std::to_string(gaze.x);
  row += ',';
  row += std::to_string(gaze.y);
  row += ',';
  row += to_string(gaze.mode);
  row += ',';
  row += format_fixed6(gaze.energy);
  return row;
}

std::string format_events_json(std::span<const EventBoundary> events) {
  std::string out = "[";
  for (std::size_t i = 0; i < events.size(); ++i) {
    if (i) out += ',';
    out += "{\"frame\":" + std::to_string(events[i].frame_index) +
           ",\"energy\":" + format_fixed6(events[i].energy) +
           ",\"z\":" + format_fixed6(events[i].z) + "}";
  }
  out += "]\n";
  return out;
}

GazeCsvSink::GazeCsvSink(const fs::path& path) : path_(path), out_(path, std::ios::binary) {
  if (!out_) throw IoError("cannot open " + path.string() + " for writing");
  out_ << kGazeCsvHeader << '\n';
}

void GazeCsvSink::consume(const FrameOutputs& outputs) {
  out_ << format_gaze_row(outputs.gaze) << '\n';
}

void GazeCsvSink::finish() {
  out_.flush();
  if (!out_) throw IoError("failed writing " + path_.string());
}

EnergiesCsvSink::EnergiesCsvSink(const fs::path& path) : path_(path), out_(path, std::ios::binary) {
  if (!out_) throw IoError("cannot open " + path.string() + " for writing");
  out_ << "frame,energy\n";
}

void EnergiesCsvSink::consume(const FrameOutputs& outputs) {
  out_ << outputs.gaze.frame_index << ',' << format_fixed6(outputs.energy) << '\n';
}

void EnergiesCsvSink::finish() {
  out_.flush();
  if (!out_) throw IoError("failed writing " + path_.string());
}

void EventsJsonSink::consume(const FrameOutputs& outputs) {
  if (outputs.boundary) events_.push_back(*outputs.boundary);
}

void EventsJsonSink::finish() {
  std::ofstream out(path_, std::ios::binary);
  if (!out) throw IoError("cannot open " + path_.string() + " for writing");
  out << format_events_json(events_);
  if (!out) throw IoError("failed writing " + path_.string());
}

HeatmapSink::HeatmapSink(fs::path dir, double max_energy)
    : dir_(std::move(dir)), max_energy_(max_energy) {
  std::error_code ec;
  fs::create_directories(dir_, ec);
  if (!fs::is_directory(dir_)) throw IoError("cannot create heatmap directory " + dir_.string());
}

void HeatmapSink::consume(const FrameOutputs& outputs) {
  char name[32];
  std::snprintf(name, sizeof name, "frame_%06lld.pgm",
                static_cast<long long>(outputs.surprise.frame_index));
  write_surprise_pgm(dir_ / name, outputs.surprise, max_energy_);
}

// ---------------------------------------------------------------------------

std::vector<GazeRecord> read_gaze_csv(const fs::path& path, std::optional<std::pair<int, int>> bounds) {
  const CsvFile csv = read_csv(path);
  const std::size_t c_frame = column(csv, "frame", path);
  const std::size_t c_x = column(csv, "x", path);
  const std::size_t c_y = column(csv, "y", path);
  const auto valid_it = std::find(csv.header.begin(), csv.header.end(), "valid");
  const std::optional<std::size_t> c_valid =
      valid_it == csv.header.end() ? std::nullopt
                                   : std::optional<std::size_t>(valid_it - csv.header.begin());

  std::vector<GazeRecord> records;
  records.reserve(csv.rows.size());
  for (const auto& [line, text] : csv.rows) {
    const auto fields = split_csv(text);
    if (fields.size() != csv.header.size()) {
      throw SchemaError(path.string() + ": expected " + std::to_string(csv.header.size()) +
                            " fields, got " + std::to_string(fields.size()),
                        line);
    }
    GazeRecord r;
    r.frame_index = parse_field<std::int64_t>(fields[c_frame], "frame", line);
    r.x = parse_field<double>(fields[c_x], "x", line);
    r.y = parse_field<double>(fields[c_y], "y", line);
    if (c_valid) {
      const int v = parse_field<int>(fields[*c_valid], "valid", line);
      if (v != 0 && v != 1) throw SchemaError(path.string() + ": valid must be 0 or 1", line);
      r.valid = v == 1;
    }
    if (r.valid && bounds &&
        (r.x < 0 || r.y < 0 || r.x >= bounds->first || r.y >= bounds->second)) {
      throw SchemaError(path.string() + ": gaze point outside the frame", line);
    }
    records.push_back(r);
  }
  return records;
}

FeatureTable read_feature_matrix(const fs::path& path) {
  FeatureTable table;
  {
    std::ifstream probe(path, std::ios::binary);
    if (!probe) throw IoError("cannot open " + path.string());
    char magic[6] = {};
    probe.read(magic, 6);
    if (probe.gcount() == 6 && std::string_view(magic, 6) == "FEAT32") {
      const auto bytes = read_all(path);
      if (bytes.size() < 14) throw SchemaError(path.string() + ": truncated FEAT32 header", 1);
      const std::uint32_t rows = load_u32(bytes.data() + 6);
      const std::uint32_t dims = load_u32(bytes.data() + 10);
      const std::size_t count = static_cast<std::size_t>(rows) * dims;
      if (bytes.size() != 14 + count * 4) {
        throw SchemaError(path.string() + ": FEAT32 payload size mismatch", 1);
      }
      table.rows.assign(rows, std::vector<double>(dims));
      for (std::uint32_t r = 0; r < rows; ++r) {
        table.frames.push_back(r);
        for (std::uint32_t d = 0; d < dims; ++d) {
          table.rows[r][d] = load_f32(bytes.data() + 14 + (static_cast<std::size_t>(r) * dims + d) * 4);
        }
      }
      return table;
    }
  }

  const CsvFile csv = read_csv(path);
  if (csv.header.empty() || csv.header.front() != "frame") {
    throw SchemaError(path.string() + ": feature header must start with 'frame'", 1);
  }
  const std::size_t dims = csv.header.size() - 1;
  if (dims == 0) throw SchemaError(path.string() + ": feature table has no feature columns", 1);
  for (const auto& [line, text] : csv.rows) {
    const auto fields = split_csv(text);
    if (fields.size() != csv.header.size()) {
      throw SchemaError(path.string() + ": expected " + std::to_string(csv.header.size()) +
                            " fields, got " + std::to_string(fields.size()),
                        line);
    }
    table.frames.push_back(parse_field<std::int64_t>(fields[0], "frame", line));
    std::vector<double> row(dims);
    for (std::size_t d = 0; d < dims; ++d) row[d] = parse_field<double>(fields[d + 1], "feature", line);
    table.rows.push_back(std::move(row));
  }
  return table;
}

void write_feat32(const fs::path& path, const Matrix& rows) {
  const std::uint32_t dims = rows.empty() ? 0 : static_cast<std::uint32_t>(rows.front().size());
  std::vector<unsigned char> bytes(14 + rows.size() * dims * 4);
  std::memcpy(bytes.data(), "FEAT32", 6);
  store_u32(bytes.data() + 6, static_cast<std::uint32_t>(rows.size()));
  store_u32(bytes.data() + 10, dims);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != dims) throw ConfigError("FEAT32 rows must share one dimension");
    for (std::size_t d = 0; d < dims; ++d) {
      store_f32(bytes.data() + 14 + (r * dims + d) * 4, static_cast<float>(rows[r][d]));
    }
  }
  std::ofstream out(path, std::ios::binary);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("failed writing " + path.string());
}

LabelTable read_label_csv(const fs::path& path) {
  const CsvFile csv = read_csv(path);
  const std::size_t c_frame = column(csv, "frame", path);
  const std::size_t c_label = column(csv, "label", path);
  LabelTable table;
  for (const auto& [line, text] : csv.rows) {
    const auto fields = split_csv(text);
    if (fields.size() != csv.header.size()) {
      throw SchemaError(path.string() + ": expected " + std::to_string(csv.header.size()) +
                            " fields, got " + std::to_string(fields.size()),
                        line);
    }
    table.frames.push_back(parse_field<std::int64_t>(fields[c_frame], "frame", line));
    const int label = parse_field<int>(fields[c_label], "label", line);
    if (label < 0) throw SchemaError(path.string() + ": labels must be non-negative", line);
    table.labels.push_back(label);
  }
  return table;
}

std::vector<VideoSpan> read_manifest(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<VideoSpan> spans;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto fields = split_csv(line);
    if (number == 1 && !fields.empty() && fields[0] == "video_id") continue;
    if (fields.size() != 3) throw SchemaError(path.string() + ": expected video_id,start_frame,end_frame", number);
    VideoSpan span;
    span.id = std::string(fields[0]);
    span.start_frame = parse_field<std::int64_t>(fields[1], "start_frame", number);
    span.end_frame = parse_field<std::int64_t>(fields[2], "end_frame", number);
    if (span.end_frame < span.start_frame) {
      throw SchemaError(path.string() + ": end_frame precedes start_frame", number);
    }
    spans.push_back(std::move(span));
  }
  return spans;
}

std::vector<EventBoundary> read_events_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError(path.string() + ": " + e.what(), 1);
  }
  if (!doc.is_array()) throw SchemaError(path.string() + ": expected a JSON array", 1);
  std::vector<EventBoundary> events;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const auto& item = doc[i];
    if (!item.is_object() || !item.contains("frame") || !item["frame"].is_number_integer()) {
      throw SchemaError(path.string() + ": element " + std::to_string(i) + " lacks an integer frame", 1);
    }
    EventBoundary b;
    b.frame_index = item["frame"].get<std::int64_t>();
    if (item.contains("energy") && item["energy"].is_number()) b.energy = item["energy"].get<double>();
    if (item.contains("z") && item["z"].is_number()) b.z = item["z"].get<double>();
    events.push_back(b);
  }
  return events;
}

}  // namespace egogaze
