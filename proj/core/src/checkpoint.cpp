#include "colornn/checkpoint.hpp"

#include <zlib.h>

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <stdexcept>
#include <vector>

namespace colornn {

namespace {

static_assert(std::endian::native == std::endian::little, "checkpoint I/O assumes a little-endian host");

class Writer {
public:
    template <typename T>
    void pod(const T &v) {
        const auto *p = reinterpret_cast<const std::uint8_t *>(&v);
        buf.insert(buf.end(), p, p + sizeof(T));
    }
    void vec(const Eigen::VectorXd &v) {
        pod<std::uint64_t>(static_cast<std::uint64_t>(v.size()));
        const auto *p = reinterpret_cast<const std::uint8_t *>(v.data());
        buf.insert(buf.end(), p, p + sizeof(double) * static_cast<std::size_t>(v.size()));
    }
    void str(const std::string &s) {
        pod<std::uint64_t>(s.size());
        buf.insert(buf.end(), s.begin(), s.end());
    }
    std::vector<std::uint8_t> buf;
};

class Reader {
public:
    Reader(const std::uint8_t *p, std::size_t n) : p_(p), n_(n) {}
    template <typename T>
    T pod() {
        need(sizeof(T));
        T v;
        std::memcpy(&v, p_ + pos_, sizeof(T));
        pos_ += sizeof(T);
        return v;
    }
    Eigen::VectorXd vec() {
        const auto n = pod<std::uint64_t>();
        if (n > (n_ - pos_) / sizeof(double)) {
            throw std::runtime_error("checkpoint truncated");
        }
        Eigen::VectorXd v(static_cast<Eigen::Index>(n));
        std::memcpy(v.data(), p_ + pos_, n * sizeof(double));
        pos_ += n * sizeof(double);
        return v;
    }
    std::string str() {
        const auto n = pod<std::uint64_t>();
        need(n);
        std::string s(reinterpret_cast<const char *>(p_ + pos_), n);
        pos_ += n;
        return s;
    }

private:
    void need(std::size_t k) const {
        if (k > n_ - pos_) {
            throw std::runtime_error("checkpoint truncated");
        }
    }
    const std::uint8_t *p_;
    std::size_t n_;
    std::size_t pos_ = 0;
};

}  // namespace

void save_checkpoint(const Checkpoint &ckpt, const std::string &path) {
    Writer w;
    w.pod<std::int32_t>(ckpt.shape.input_bits);
    w.pod<std::int32_t>(ckpt.shape.hidden);
    w.pod<std::int32_t>(ckpt.shape.final_bits);
    w.vec(ckpt.params);
    w.pod(ckpt.adam.lr);
    w.pod(ckpt.adam.beta1);
    w.pod(ckpt.adam.beta2);
    w.pod(ckpt.adam.eps);
    w.vec(ckpt.adam_m);
    w.vec(ckpt.adam_v);
    w.pod(ckpt.adam_steps);
    w.pod(ckpt.sampler_key);
    w.pod(ckpt.sampler_counter);
    w.pod(ckpt.dropout_key);
    w.pod(ckpt.dropout_counter);
    w.pod<std::int32_t>(ckpt.epoch);
    w.pod(ckpt.best_epsilon);
    w.str(ckpt.meta_json);
    const auto crc = static_cast<std::uint32_t>(crc32(0L, w.buf.data(), static_cast<uInt>(w.buf.size())));

    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw std::runtime_error("cannot open " + tmp);
        }
        out.write("CCNK", 4);
        const std::uint16_t version = kCheckpointVersion;
        out.write(reinterpret_cast<const char *>(&version), 2);
        out.write(reinterpret_cast<const char *>(w.buf.data()), static_cast<std::streamsize>(w.buf.size()));
        out.write(reinterpret_cast<const char *>(&crc), 4);
        if (!out) {
            throw std::runtime_error("failed writing " + tmp);
        }
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        throw std::runtime_error("cannot move checkpoint into " + path);
    }
}

Checkpoint load_checkpoint(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open " + path);
    }
    std::vector<std::uint8_t> all((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (all.size() < 10 || std::memcmp(all.data(), "CCNK", 4) != 0) {
        throw std::runtime_error(path + ": not a checkpoint");
    }
    std::uint16_t version;
    std::memcpy(&version, all.data() + 4, 2);
    if (version != kCheckpointVersion) {
        throw std::runtime_error(path + ": checkpoint version mismatch");
    }
    const std::size_t body = all.size() - 10;
    std::uint32_t crc;
    std::memcpy(&crc, all.data() + 6 + body, 4);
    if (crc != static_cast<std::uint32_t>(crc32(0L, all.data() + 6, static_cast<uInt>(body)))) {
        throw std::runtime_error(path + ": checkpoint checksum mismatch");
    }
    Reader r(all.data() + 6, body);
    Checkpoint c;
    c.shape.input_bits = r.pod<std::int32_t>();
    c.shape.hidden = r.pod<std::int32_t>();
    c.shape.final_bits = r.pod<std::int32_t>();
    c.params = r.vec();
    c.adam.lr = r.pod<double>();
    c.adam.beta1 = r.pod<double>();
    c.adam.beta2 = r.pod<double>();
    c.adam.eps = r.pod<double>();
    c.adam_m = r.vec();
    c.adam_v = r.vec();
    c.adam_steps = r.pod<std::int64_t>();
    c.sampler_key = r.pod<std::uint64_t>();
    c.sampler_counter = r.pod<std::uint64_t>();
    c.dropout_key = r.pod<std::uint64_t>();
    c.dropout_counter = r.pod<std::uint64_t>();
    c.epoch = r.pod<std::int32_t>();
    c.best_epsilon = r.pod<double>();
    c.meta_json = r.str();
    return c;
}

DecoderNet net_from_checkpoint(const Checkpoint &ckpt) {
    DecoderNet net(ckpt.shape);
    if (net.num_params() != ckpt.params.size()) {
        throw std::runtime_error("checkpoint parameter count does not match its shape");
    }
    net.params() = ckpt.params;
    return net;
}

}  // namespace colornn
