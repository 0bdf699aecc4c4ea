#include "colornn/dataset.hpp"

#include <zlib.h>

#include <cstring>
#include <ostream>

#include <nlohmann/json.hpp>

namespace colornn {

namespace {

using json = nlohmann::ordered_json;

constexpr char kMagic[4] = {'C', 'C', 'N', 'N'};
constexpr std::uint32_t kMaxCycles = 1u << 24;

std::size_t packed_len(std::size_t bits) { return (bits + 7) / 8; }

template <typename T>
void put(std::vector<std::uint8_t> &buf, T v) {
    for (std::size_t i = 0; i < sizeof(T); ++i) {
        buf.push_back(static_cast<std::uint8_t>(static_cast<std::uint64_t>(v) >> (8 * i)));
    }
}

template <typename T>
T get(const std::uint8_t *p) {
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) {
        v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
    }
    return static_cast<T>(v);
}

void put_bits(std::vector<std::uint8_t> &buf, const BitVector &v) {
    const auto bytes = v.to_bytes();
    buf.insert(buf.end(), bytes.begin(), bytes.end());
}

template <typename T>
void write_scalar(std::ostream &out, T v) {
    std::vector<std::uint8_t> buf;
    put(buf, v);
    out.write(reinterpret_cast<const char *>(buf.data()), static_cast<std::streamsize>(buf.size()));
}

void read_exact(std::istream &in, std::uint8_t *dst, std::size_t n, const char *what) {
    in.read(reinterpret_cast<char *>(dst), static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in.gcount()) != n) {
        throw DatasetError(std::string("dataset truncated while reading ") + what);
    }
}

template <typename T>
T read_scalar(std::istream &in, const char *what) {
    std::uint8_t b[sizeof(T)];
    read_exact(in, b, sizeof(T), what);
    return get<T>(b);
}

std::uint32_t crc_of(const std::vector<std::uint8_t> &buf) {
    return static_cast<std::uint32_t>(crc32(0L, buf.data(), static_cast<uInt>(buf.size())));
}

const char *mode_name(DatasetMode m) { return m == DatasetMode::kTrain ? "train" : "test"; }

}  // namespace

std::string header_to_json(const DatasetHeader &h) {
    json j;
    j["format"] = "ccnn";
    j["version"] = kDatasetVersion;
    j["distance"] = h.distance;
    j["n_tiles"] = h.n_tiles;
    j["p_error"] = h.p_error;
    j["reset_mode"] = h.reset_mode == ResetMode::kReset ? "reset" : "no_reset";
    j["basis"] = h.basis == Basis::kZ ? "Z" : "X";
    j["mode"] = mode_name(h.mode);
    j["seed"] = h.seed;
    j["count"] = h.count;
    j["t_min"] = h.t_min;
    j["t_max"] = h.t_max;
    j["readout_cycles"] = h.readout_cycles;
    j["steps_per_cycle"] = kStepsPerCycle;
    j["record_bits"] = {{"per_cycle", "delta_s(X,Z) || s_flag(X,Z)"}, {"final", "delta_f || p_true"}};
    j["first_cycle_reference"] = "m(0) = 0";
    if (!h.layout_json.empty()) {
        j["layout"] = json::parse(h.layout_json);
    }
    return j.dump();
}

DatasetHeader header_from_json(const std::string &text) {
    DatasetHeader h;
    try {
        const auto j = json::parse(text);
        h.distance = j.at("distance").get<int>();
        h.n_tiles = j.at("n_tiles").get<int>();
        h.p_error = j.at("p_error").get<double>();
        h.reset_mode = j.at("reset_mode").get<std::string>() == "reset" ? ResetMode::kReset : ResetMode::kNoReset;
        h.basis = j.at("basis").get<std::string>() == "Z" ? Basis::kZ : Basis::kX;
        h.mode = j.at("mode").get<std::string>() == "train" ? DatasetMode::kTrain : DatasetMode::kTest;
        h.seed = j.at("seed").get<std::uint64_t>();
        h.count = j.at("count").get<std::uint64_t>();
        h.t_min = j.at("t_min").get<int>();
        h.t_max = j.at("t_max").get<int>();
        h.readout_cycles = j.at("readout_cycles").get<std::vector<int>>();
        if (j.contains("layout")) {
            h.layout_json = j["layout"].dump(2);
        }
    } catch (const nlohmann::json::exception &e) {
        throw DatasetError(std::string("malformed dataset header: ") + e.what());
    }
    if (h.n_tiles <= 0) {
        throw DatasetError("malformed dataset header: n_tiles");
    }
    return h;
}

DatasetWriter::DatasetWriter(const std::string &path, const DatasetHeader &header)
    : out_(path, std::ios::binary | std::ios::trunc), header_(header) {
    if (!out_) {
        throw DatasetError("cannot open " + path + " for writing");
    }
    const auto text = header_to_json(header_);
    out_.write(kMagic, 4);
    write_scalar<std::uint16_t>(out_, kDatasetVersion);
    write_scalar<std::uint32_t>(out_, static_cast<std::uint32_t>(text.size()));
    out_.write(text.data(), static_cast<std::streamsize>(text.size()));
    count_pos_ = out_.tellp();
    write_scalar<std::uint64_t>(out_, 0);
    open_ = true;
}

DatasetWriter::~DatasetWriter() {
    try {
        close();
    } catch (...) {
    }
}

void DatasetWriter::write(const SyndromeSequence &seq) {
    const auto nc = static_cast<std::size_t>(2 * header_.n_tiles);
    if (seq.cycles < 1 || seq.delta_s.size() != static_cast<std::size_t>(seq.cycles) ||
        seq.s_flag.size() != seq.delta_s.size() || seq.finals.empty()) {
        throw DatasetError("write: malformed sequence");
    }
    std::vector<std::uint8_t> buf;
    put<std::uint32_t>(buf, static_cast<std::uint32_t>(seq.cycles));
    put<std::uint32_t>(buf, static_cast<std::uint32_t>(seq.finals.size()));
    for (int t = 0; t < seq.cycles; ++t) {
        const auto &ds = seq.delta_s[static_cast<std::size_t>(t)];
        const auto &sf = seq.s_flag[static_cast<std::size_t>(t)];
        if (ds.size() != nc || sf.size() != nc) {
            throw DatasetError("write: record dimensions do not match header");
        }
        BitVector row = ds;
        row.append(sf);
        put_bits(buf, row);
    }
    for (const auto &f : seq.finals) {
        if (f.delta_f.size() != static_cast<std::size_t>(header_.n_tiles)) {
            throw DatasetError("write: delta_f dimension does not match header");
        }
        put<std::uint32_t>(buf, static_cast<std::uint32_t>(f.cycle));
        put_bits(buf, f.delta_f);
        buf.push_back(f.p_true ? 1 : 0);
    }
    const auto crc = crc_of(buf);
    out_.write(reinterpret_cast<const char *>(buf.data()), static_cast<std::streamsize>(buf.size()));
    write_scalar<std::uint32_t>(out_, crc);
    if (!out_) {
        throw DatasetError("write failed");
    }
    ++written_;
}

void DatasetWriter::close() {
    if (!open_) {
        return;
    }
    open_ = false;
    out_.seekp(count_pos_);
    write_scalar<std::uint64_t>(out_, written_);
    out_.close();
    if (!out_) {
        throw DatasetError("failed to finalize dataset file");
    }
}

DatasetReader::DatasetReader(const std::string &path) : in_(path, std::ios::binary), path_(path) {
    if (!in_) {
        throw DatasetError("cannot open " + path);
    }
    char magic[4];
    in_.read(magic, 4);
    if (in_.gcount() != 4 || std::memcmp(magic, kMagic, 4) != 0) {
        throw DatasetError(path + ": not a dataset file");
    }
    const auto version = read_scalar<std::uint16_t>(in_, "version");
    if (version != kDatasetVersion) {
        throw DatasetError(path + ": version mismatch (" + std::to_string(version) + ")");
    }
    const auto len = read_scalar<std::uint32_t>(in_, "header length");
    std::string text(len, '\0');
    read_exact(in_, reinterpret_cast<std::uint8_t *>(text.data()), len, "header");
    header_ = header_from_json(text);
    header_.count = read_scalar<std::uint64_t>(in_, "record count");
    remaining_ = header_.count;
    first_record_ = in_.tellg();
}

void DatasetReader::rewind() {
    in_.clear();
    in_.seekg(first_record_);
    remaining_ = header_.count;
}

bool DatasetReader::next(SyndromeSequence &seq) {
    if (remaining_ == 0) {
        return false;
    }
    const auto nc = static_cast<std::size_t>(2 * header_.n_tiles);
    const auto nt = static_cast<std::size_t>(header_.n_tiles);
    std::vector<std::uint8_t> buf(8);
    read_exact(in_, buf.data(), 8, "record");
    const auto cycles = get<std::uint32_t>(buf.data());
    const auto n_finals = get<std::uint32_t>(buf.data() + 4);
    if (cycles == 0 || cycles > kMaxCycles || n_finals == 0 || n_finals > cycles) {
        throw DatasetError(path_ + ": corrupt record length");
    }
    const std::size_t row_bytes = packed_len(2 * nc);
    const std::size_t final_bytes = 4 + packed_len(nt) + 1;
    const std::size_t body = cycles * row_bytes + n_finals * final_bytes;
    buf.resize(8 + body);
    read_exact(in_, buf.data() + 8, body, "record");
    const auto crc = read_scalar<std::uint32_t>(in_, "checksum");
    if (crc != crc_of(buf)) {
        throw DatasetError(path_ + ": checksum mismatch");
    }
    seq = SyndromeSequence{};
    seq.cycles = static_cast<int>(cycles);
    const std::uint8_t *p = buf.data() + 8;
    for (std::uint32_t t = 0; t < cycles; ++t, p += row_bytes) {
        const auto row = BitVector::from_bytes({p, row_bytes}, 2 * nc);
        seq.delta_s.push_back(row.slice(0, nc));
        seq.s_flag.push_back(row.slice(nc, nc));
    }
    for (std::uint32_t k = 0; k < n_finals; ++k) {
        FinalSample f;
        f.cycle = static_cast<int>(get<std::uint32_t>(p));
        f.delta_f = BitVector::from_bytes({p + 4, packed_len(nt)}, nt);
        f.p_true = p[4 + packed_len(nt)] != 0;
        seq.finals.push_back(std::move(f));
        p += final_bytes;
    }
    --remaining_;
    return true;
}

void write_dataset(const Dataset &dataset, const std::string &path) {
    DatasetHeader h = dataset.header;
    h.count = dataset.records.size();
    DatasetWriter w(path, h);
    for (const auto &r : dataset.records) {
        w.write(r);
    }
    w.close();
}

Dataset read_dataset(const std::string &path) {
    DatasetReader r(path);
    Dataset ds;
    ds.header = r.header();
    SyndromeSequence seq;
    while (r.next(seq)) {
        ds.records.push_back(seq);
    }
    return ds;
}

void export_csv(const Dataset &dataset, std::ostream &out) {
    out << "record,kind,t,bits,p_true\n";
    for (std::size_t i = 0; i < dataset.records.size(); ++i) {
        const auto &r = dataset.records[i];
        for (int t = 0; t < r.cycles; ++t) {
            out << i << ",step," << (t + 1) << ',' << r.delta_s[static_cast<std::size_t>(t)].to_string() << '|'
                << r.s_flag[static_cast<std::size_t>(t)].to_string() << ",\n";
        }
        for (const auto &f : r.finals) {
            out << i << ",final," << f.cycle << ',' << f.delta_f.to_string() << ',' << (f.p_true ? 1 : 0) << '\n';
        }
    }
}

}  // namespace colornn
