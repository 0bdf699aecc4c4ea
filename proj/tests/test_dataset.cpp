#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "colornn/dataset.hpp"
#include "colornn/generate.hpp"

using namespace colornn;

namespace {

std::string temp_path(const std::string &name) {
    return (std::filesystem::temp_directory_path() / ("colornn_test_" + name)).string();
}

std::vector<char> slurp(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void spit(const std::string &path, const std::vector<char> &bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

Dataset small_dataset(DatasetMode mode) {
    GenerateConfig g;
    g.distance = 3;
    g.p_error = 5e-3;
    g.count = 40;
    g.t_min = 1;
    g.t_max = 12;
    g.mode = mode;
    g.seed = 5;
    return generate_dataset(g);
}

}  // namespace

TEST(Dataset, TrainRoundTripIsExact) {
    const auto ds = small_dataset(DatasetMode::kTrain);
    const auto path = temp_path("train.ccnn");
    write_dataset(ds, path);
    const auto back = read_dataset(path);
    EXPECT_EQ(back.records, ds.records);
    EXPECT_EQ(back.header.count, 40u);
    EXPECT_EQ(back.header.distance, 3);
    EXPECT_EQ(back.header.p_error, 5e-3);
    EXPECT_EQ(back.header.seed, 5u);
    EXPECT_EQ(back.header.layout_json, ds.header.layout_json);
    std::filesystem::remove(path);
}

TEST(Dataset, TestModeKeepsEveryReadout) {
    const auto ds = small_dataset(DatasetMode::kTest);
    ASSERT_FALSE(ds.header.readout_cycles.empty());
    EXPECT_EQ(ds.header.readout_cycles.back(), 12);
    for (const auto &r : ds.records) {
        EXPECT_EQ(r.cycles, 12);
        ASSERT_EQ(r.finals.size(), ds.header.readout_cycles.size());
        for (std::size_t k = 0; k < r.finals.size(); ++k) {
            EXPECT_EQ(r.finals[k].cycle, ds.header.readout_cycles[k]);
        }
    }
    const auto path = temp_path("test.ccnn");
    write_dataset(ds, path);
    EXPECT_EQ(read_dataset(path).records, ds.records);
    std::filesystem::remove(path);
}

TEST(Dataset, EmptyFileIsValid) {
    Dataset ds;
    ds.header = small_dataset(DatasetMode::kTrain).header;
    ds.header.count = 0;
    const auto path = temp_path("empty.ccnn");
    write_dataset(ds, path);
    const auto back = read_dataset(path);
    EXPECT_TRUE(back.records.empty());
    EXPECT_EQ(back.header.count, 0u);
    std::filesystem::remove(path);
}

TEST(Dataset, CorruptedByteIsDetected) {
    const auto ds = small_dataset(DatasetMode::kTrain);
    const auto path = temp_path("corrupt.ccnn");
    write_dataset(ds, path);
    auto bytes = slurp(path);
    bytes[bytes.size() - 20] ^= 0x10;
    spit(path, bytes);
    EXPECT_THROW(read_dataset(path), DatasetError);
    std::filesystem::remove(path);
}

TEST(Dataset, TruncationIsDetected) {
    const auto ds = small_dataset(DatasetMode::kTrain);
    const auto path = temp_path("trunc.ccnn");
    write_dataset(ds, path);
    auto bytes = slurp(path);
    bytes.resize(bytes.size() - 3);
    spit(path, bytes);
    EXPECT_THROW(read_dataset(path), DatasetError);
    std::filesystem::remove(path);
}

TEST(Dataset, VersionAndMagicAreChecked) {
    const auto ds = small_dataset(DatasetMode::kTrain);
    const auto path = temp_path("version.ccnn");
    write_dataset(ds, path);
    auto bytes = slurp(path);
    auto v = bytes;
    v[4] = 9;
    spit(path, v);
    EXPECT_THROW(read_dataset(path), DatasetError);
    auto m = bytes;
    m[0] = 'X';
    spit(path, m);
    EXPECT_THROW(read_dataset(path), DatasetError);
    std::filesystem::remove(path);
    EXPECT_THROW(read_dataset(temp_path("does_not_exist.ccnn")), DatasetError);
}

TEST(Dataset, WriterRejectsMismatchedRecord) {
    const auto ds = small_dataset(DatasetMode::kTrain);
    auto header = ds.header;
    header.n_tiles = 9;
    const auto path = temp_path("mismatch.ccnn");
    DatasetWriter w(path, header);
    EXPECT_THROW(w.write(ds.records.front()), DatasetError);
    w.close();
    std::filesystem::remove(path);
}

TEST(Dataset, StreamingReaderRewinds) {
    const auto ds = small_dataset(DatasetMode::kTrain);
    const auto path = temp_path("stream.ccnn");
    write_dataset(ds, path);
    DatasetReader r(path);
    SyndromeSequence a, b;
    ASSERT_TRUE(r.next(a));
    r.rewind();
    ASSERT_TRUE(r.next(b));
    EXPECT_EQ(a, b);
    std::filesystem::remove(path);
}

TEST(Dataset, HeaderJsonRoundTrip) {
    const auto h = small_dataset(DatasetMode::kTest).header;
    const auto back = header_from_json(header_to_json(h));
    EXPECT_EQ(back.readout_cycles, h.readout_cycles);
    EXPECT_EQ(back.mode, DatasetMode::kTest);
    EXPECT_EQ(back.input_bits(), 12);
    EXPECT_THROW(header_from_json("{\"distance\": 3}"), DatasetError);
}

TEST(Dataset, CsvExport) {
    const auto ds = small_dataset(DatasetMode::kTrain);
    std::ostringstream os;
    Dataset one{ds.header, {ds.records.front()}};
    export_csv(one, os);
    const auto text = os.str();
    EXPECT_EQ(text.rfind("record,kind,t,bits,p_true\n", 0), 0u);
    const auto lines = std::count(text.begin(), text.end(), '\n');
    EXPECT_EQ(lines, 1 + ds.records.front().cycles + 1);
}
