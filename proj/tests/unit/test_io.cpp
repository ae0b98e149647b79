#include <gtest/gtest.h>

#include <sstream>

#include "egogaze/errors.hpp"
#include "egogaze/io.hpp"
#include "egogaze/synthetic.hpp"
#include "unit/temp_dir.hpp"

namespace egogaze {
namespace {

using testing_support::slurp;
using testing_support::spit;
using testing_support::TempDir;

template <typename Fn>
std::size_t schema_line(Fn&& fn) {
  try {
    fn();
  } catch (const SchemaError& e) {
    return e.line();
  }
  ADD_FAILURE() << "no SchemaError thrown";
  return 0;
}

TEST(Ppm, RoundTrip) {
  TempDir dir;
  const auto frame = synthetic::noise_texture(37, 21, 3, 128, 127, 4);
  write_ppm(dir / "a.ppm", frame);
  const auto back = read_ppm(dir / "a.ppm", 5);
  EXPECT_EQ(back.width, 37);
  EXPECT_EQ(back.height, 21);
  EXPECT_EQ(back.index, 5);
  EXPECT_EQ(back.pixels, frame.pixels);
}

TEST(Ppm, HeaderComments) {
  TempDir dir;
  spit(dir / "c.ppm", std::string("P6\n# made by hand\n2 1\n255\n") + "\x01\x02\x03\x04\x05\x06");
  const auto f = read_ppm(dir / "c.ppm", 0);
  EXPECT_EQ(f.pixels, (std::vector<std::uint8_t>{1, 2, 3, 4, 5, 6}));
}

TEST(Ppm, Errors) {
  TempDir dir;
  EXPECT_THROW(read_ppm(dir / "missing.ppm", 0), IoError);
  spit(dir / "p3.ppm", "P3\n1 1\n255\n0 0 0\n");
  EXPECT_THROW(read_ppm(dir / "p3.ppm", 0), IoError);
  spit(dir / "deep.ppm", "P6\n1 1\n65535\n012345");
  EXPECT_THROW(read_ppm(dir / "deep.ppm", 0), IoError);
  spit(dir / "short.ppm", "P6\n2 2\n255\n0123");
  EXPECT_THROW(read_ppm(dir / "short.ppm", 0), IoError);
}

TEST(Flo32, LittleEndianLayout) {
  TempDir dir;
  const std::vector<float> flow{1.0f, -2.0f, 0.5f, 3.0f};
  write_flo32(dir / "f.flo32", 2, 1, flow);
  const auto bytes = slurp(dir / "f.flo32");
  ASSERT_EQ(bytes.size(), 8u + 16u);
  EXPECT_EQ(bytes.substr(0, 8), std::string("\x02\x00\x00\x00\x01\x00\x00\x00", 8));
  EXPECT_EQ(bytes.substr(8, 4), std::string("\x00\x00\x80\x3f", 4));  // 1.0f
  EXPECT_EQ(read_flo32(dir / "f.flo32", 2, 1), flow);
  EXPECT_THROW(read_flo32(dir / "f.flo32", 1, 2), IoError);
}

TEST(PpmDirectory, SortedWithFlowSidecars) {
  TempDir dir;
  std::filesystem::create_directories(dir / "flow");
  for (int i : {2, 0, 1}) {
    auto f = synthetic::constant_frame(4, 4, 0, static_cast<std::uint8_t>(i), 0, 0);
    write_ppm(dir / ("img_" + std::to_string(i) + ".ppm"), f);
    write_flo32(dir / "flow" / ("img_" + std::to_string(i) + ".flo32"), 4, 4,
                std::vector<float>(32, static_cast<float>(i)));
  }
  spit(dir / "notes.txt", "ignored");
  PpmDirectorySource src(dir.path(), dir / "flow");
  EXPECT_EQ(src.size(), 3u);
  for (int i = 0; i < 3; ++i) {
    auto f = src.next();
    ASSERT_TRUE(f);
    EXPECT_EQ(f->index, i);
    EXPECT_EQ(f->pixels[0], i);
    ASSERT_TRUE(f->has_flow());
    EXPECT_EQ(f->flow[0], static_cast<float>(i));
  }
  EXPECT_FALSE(src.next());
}

TEST(PpmDirectory, Errors) {
  TempDir dir;
  EXPECT_THROW(PpmDirectorySource(dir / "nope"), IoError);
  write_ppm(dir / "a.ppm", synthetic::constant_frame(4, 4, 0, 0, 0, 0));
  write_ppm(dir / "b.ppm", synthetic::constant_frame(5, 4, 0, 0, 0, 0));
  PpmDirectorySource src(dir.path());
  EXPECT_TRUE(src.next());
  EXPECT_THROW(src.next(), IoError);
}

TEST(RawVideo, StreamsFrames) {
  std::stringstream ss;
  write_rawvideo_header(ss, 2, 2, 29.97);
  EXPECT_EQ(ss.str(), "RAWVIDEO 2 2 29.97\n");
  for (int i = 0; i < 3; ++i) ss << std::string(12, static_cast<char>(i + 1));
  RawVideoSource src(ss);
  EXPECT_EQ(src.width(), 2);
  EXPECT_DOUBLE_EQ(src.fps(), 29.97);
  for (int i = 0; i < 3; ++i) {
    auto f = src.next();
    ASSERT_TRUE(f);
    EXPECT_EQ(f->index, i);
    EXPECT_EQ(f->pixels, std::vector<std::uint8_t>(12, static_cast<std::uint8_t>(i + 1)));
  }
  EXPECT_FALSE(src.next());
}

TEST(RawVideo, Errors) {
  std::stringstream bad("MJPEG 2 2 30\n");
  EXPECT_THROW(RawVideoSource{bad}, IoError);
  std::stringstream truncated("RAWVIDEO 2 2 30\n0123456789");
  RawVideoSource src(truncated);
  EXPECT_THROW(src.next(), IoError);
}

TEST(Formats, GazeRow) {
  GazePrediction g;
  g.frame_index = 12;
  g.x = 340;
  g.y = 255;
  g.mode = GazeMode::CenterBias;
  g.energy = 0.1234567;
  EXPECT_EQ(format_gaze_row(g), "12,340,255,center-bias,0.123457");
  g.mode = GazeMode::Fixation;
  g.energy = 0.0;
  EXPECT_EQ(format_gaze_row(g), "12,340,255,fixation,0.000000");
}

TEST(Formats, EventsJson) {
  EXPECT_EQ(format_events_json({}), "[]\n");
  const std::vector<EventBoundary> ev{{100, 12.5, 3.25}, {130, 1.0, kMaxZ}};
  EXPECT_EQ(format_events_json(ev),
            "[{\"frame\":100,\"energy\":12.500000,\"z\":3.250000},"
            "{\"frame\":130,\"energy\":1.000000,\"z\":1000000000.000000}]\n");
}

TEST(Formats, EventsJsonRoundTrip) {
  TempDir dir;
  const std::vector<EventBoundary> ev{{7, 0.5, 2.75}};
  spit(dir / "e.json", format_events_json(ev));
  const auto back = read_events_json(dir / "e.json");
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0].frame_index, 7);
  EXPECT_EQ(back[0].z, 2.75);
  spit(dir / "bad.json", "{\"frame\":1}");
  EXPECT_THROW(read_events_json(dir / "bad.json"), SchemaError);
  spit(dir / "broken.json", "[{");
  EXPECT_THROW(read_events_json(dir / "broken.json"), SchemaError);
}

TEST(GazeCsv, ReadsByColumnName) {
  TempDir dir;
  spit(dir / "g.csv", "x,frame,valid,y\n10.5,0,1,20\n\n0,1,0,0\n");
  const auto recs = read_gaze_csv(dir / "g.csv");
  ASSERT_EQ(recs.size(), 2u);
  EXPECT_EQ(recs[0].frame_index, 0);
  EXPECT_EQ(recs[0].x, 10.5);
  EXPECT_EQ(recs[0].y, 20.0);
  EXPECT_FALSE(recs[1].valid);
}

TEST(GazeCsv, SchemaErrorsCarryLine) {
  TempDir dir;
  spit(dir / "a.csv", "frame,x,y\n0,1,2\n1,abc,2\n");
  EXPECT_EQ(schema_line([&] { read_gaze_csv(dir / "a.csv"); }), 3u);
  spit(dir / "b.csv", "frame,x\n0,1\n");
  EXPECT_EQ(schema_line([&] { read_gaze_csv(dir / "b.csv"); }), 1u);
  spit(dir / "c.csv", "frame,x,y\n0,1,2\n1,2\n");
  EXPECT_EQ(schema_line([&] { read_gaze_csv(dir / "c.csv"); }), 3u);
  spit(dir / "d.csv", "frame,x,y\n0,1,2\n1,700,2\n");
  EXPECT_EQ(schema_line([&] { read_gaze_csv(dir / "d.csv", std::pair{640, 480}); }), 3u);
  spit(dir / "e.csv", "frame,x,y,valid\n0,1,2,2\n");
  EXPECT_EQ(schema_line([&] { read_gaze_csv(dir / "e.csv"); }), 2u);
}

TEST(Gaze, SinkOutputParsesBack) {
  TempDir dir;
  {
    GazeCsvSink sink(dir / "g.csv");
    FrameOutputs o;
    o.gaze.x = 20;
    o.gaze.y = 15;
    sink.consume(o);
    sink.finish();
  }
  EXPECT_EQ(slurp(dir / "g.csv"), "frame,x,y,mode,energy\n0,20,15,fixation,0.000000\n");
  EXPECT_EQ(read_gaze_csv(dir / "g.csv").size(), 1u);
}

TEST(Features, Feat32AndCsv) {
  TempDir dir;
  const Matrix rows{{0.5, 1.0, -2.0}, {0.25, 0.0, 8.0}};
  write_feat32(dir / "f.bin", rows);
  const auto bytes = slurp(dir / "f.bin");
  EXPECT_EQ(bytes.substr(0, 6), "FEAT32");
  EXPECT_EQ(bytes.size(), 14u + 24u);
  const auto t = read_feature_matrix(dir / "f.bin");
  EXPECT_EQ(t.rows, rows);
  EXPECT_EQ(t.frames, (std::vector<std::int64_t>{0, 1}));

  spit(dir / "f.csv", "frame,a,b\n3,1.5,2\n4,0,-1\n");
  const auto c = read_feature_matrix(dir / "f.csv");
  EXPECT_EQ(c.frames, (std::vector<std::int64_t>{3, 4}));
  EXPECT_EQ(c.rows, (Matrix{{1.5, 2}, {0, -1}}));
  spit(dir / "g.csv", "frame,a\n3,1.5\n4,x\n");
  EXPECT_EQ(schema_line([&] { read_feature_matrix(dir / "g.csv"); }), 3u);
  spit(dir / "h.csv", "id,a\n3,1.5\n");
  EXPECT_EQ(schema_line([&] { read_feature_matrix(dir / "h.csv"); }), 1u);
}

TEST(Labels, CsvAndManifest) {
  TempDir dir;
  spit(dir / "l.csv", "frame,label\n0,1\n1,0\n");
  const auto l = read_label_csv(dir / "l.csv");
  EXPECT_EQ(l.labels, (std::vector<int>{1, 0}));
  spit(dir / "m.csv", "frame,label\n0,1\n1,-3\n");
  EXPECT_EQ(schema_line([&] { read_label_csv(dir / "m.csv"); }), 3u);

  spit(dir / "v.csv", "video_id,start_frame,end_frame\nA,0,99\nB,100,149\n");
  const auto spans = read_manifest(dir / "v.csv");
  ASSERT_EQ(spans.size(), 2u);
  EXPECT_EQ(spans[1].id, "B");
  EXPECT_EQ(spans[1].end_frame, 149);
  spit(dir / "w.csv", "A,0,99\nB,100\n");
  EXPECT_EQ(schema_line([&] { read_manifest(dir / "w.csv"); }), 2u);
  spit(dir / "x.csv", "A,50,10\n");
  EXPECT_EQ(schema_line([&] { read_manifest(dir / "x.csv"); }), 1u);
}

TEST(Heatmaps, OnePgmPerFrame) {
  TempDir dir;
  HeatmapSink sink(dir / "maps", 1.0);
  FrameOutputs o;
  o.surprise = SurpriseMap::zeros(build_geometry(4, 4, 2), 3);
  o.gaze.frame_index = 3;
  sink.consume(o);
  EXPECT_TRUE(std::filesystem::exists(dir / "maps" / "frame_000003.pgm"));
}

}  // namespace
}  // namespace egogaze
