#pragma once

#include <cstdint>
#include <fstream>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "colornn/circuit.hpp"
#include "colornn/syndrome.hpp"

namespace colornn {

class DatasetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class DatasetMode { kTrain, kTest };

struct DatasetHeader {
    int distance = 3;
    int n_tiles = 3;
    double p_error = 0.0;
    ResetMode reset_mode = ResetMode::kReset;
    Basis basis = Basis::kZ;
    DatasetMode mode = DatasetMode::kTrain;
    std::uint64_t seed = 0;
    std::uint64_t count = 0;
    int t_min = 1;
    int t_max = 1;
    std::vector<int> readout_cycles;  // test mode only
    std::string layout_json;          // optional copy of layout_to_json

    int input_bits() const { return 4 * n_tiles; }  // delta_s || s_flag per cycle
    bool operator==(const DatasetHeader &) const = default;
};

struct Dataset {
    DatasetHeader header;
    std::vector<SyndromeSequence> records;
    bool operator==(const Dataset &) const = default;
};

inline constexpr std::uint16_t kDatasetVersion = 1;

std::string header_to_json(const DatasetHeader &h);
DatasetHeader header_from_json(const std::string &text);

/// Little-endian binary file:
///   "CCNN" | u16 version | u32 header length | header JSON | u64 record count
///   per record: u32 T | u32 readouts | T x packed(delta_s || s_flag)
///               | readouts x (u32 cycle | packed delta_f | u8 p_true) | u32 CRC-32
class DatasetWriter {
public:
    DatasetWriter(const std::string &path, const DatasetHeader &header);
    ~DatasetWriter();
    DatasetWriter(const DatasetWriter &) = delete;
    DatasetWriter &operator=(const DatasetWriter &) = delete;

    void write(const SyndromeSequence &seq);
    /// Patches the record count and closes. Called by the destructor if needed.
    void close();
    std::uint64_t written() const { return written_; }

private:
    std::ofstream out_;
    DatasetHeader header_;
    std::streampos count_pos_;
    std::uint64_t written_ = 0;
    bool open_ = false;
};

class DatasetReader {
public:
    explicit DatasetReader(const std::string &path);
    const DatasetHeader &header() const { return header_; }
    /// False at the end of the file. Throws DatasetError on corruption.
    bool next(SyndromeSequence &seq);
    /// Back to the first record.
    void rewind();

private:
    std::ifstream in_;
    std::string path_;
    DatasetHeader header_;
    std::streampos first_record_;
    std::uint64_t remaining_ = 0;
};

void write_dataset(const Dataset &dataset, const std::string &path);
Dataset read_dataset(const std::string &path);

/// One line per cycle ("step") and per readout ("final"):
/// record,kind,t,bits,p_true
void export_csv(const Dataset &dataset, std::ostream &out);

}  // namespace colornn
