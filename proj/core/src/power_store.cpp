#include <algorithm>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "gridcodes/minplus.hpp"

namespace gridcodes {

namespace fs = std::filesystem;

namespace {

constexpr char kMagic[8] = {'G', 'C', 'P', 'O', 'W', 'E', 'R', '1'};

struct FileHeader {
    char magic[8];
    std::uint32_t dim;
    std::uint32_t k;
    std::uint8_t width;
    std::uint8_t all_infinite;
    std::uint16_t reserved;
    std::int64_t offset;
    std::uint64_t digest;
};
static_assert(sizeof(FileHeader) == 40);

fs::path power_path(const fs::path& dir, int k) {
    char name[32];
    std::snprintf(name, sizeof name, "pow_%06d.bin", k);
    return dir / name;
}

std::string hex64(std::uint64_t v) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

}  // namespace

PowerStore PowerStore::open(const fs::path& dir, std::uint64_t base_digest) {
    PowerStore s;
    s.dir_ = dir;
    fs::create_directories(dir);

    const fs::path meta = dir / "store_meta.tsv";
    const std::string expected = "gcpower-store\t1\nbase\t" + hex64(base_digest) + "\n";
    bool fresh = true;
    if (fs::exists(meta)) {
        std::ifstream in(meta, std::ios::binary);
        std::stringstream buf;
        buf << in.rdbuf();
        fresh = buf.str() != expected;
    }
    if (fresh) {
        // A store belongs to exactly one base matrix; anything else is stale.
        fs::remove_all(dir);
        fs::create_directories(dir);
        std::ofstream out(meta, std::ios::binary | std::ios::trunc);
        out << expected;
        if (!out) throw StoreError("cannot write " + meta.string());
        return s;
    }

    std::ifstream idx(dir / "index.tsv");
    std::string digest_hex;
    int k;
    while (idx >> digest_hex >> k) {
        s.index_[std::stoull(digest_hex, nullptr, 16)].push_back(k);
        s.max_k_ = std::max(s.max_k_, k);
    }
    for (auto& [digest, ks] : s.index_) std::sort(ks.begin(), ks.end());
    return s;
}

bool PowerStore::has(int k) const {
    for (const auto& [digest, ks] : index_)
        if (std::binary_search(ks.begin(), ks.end(), k))
            return fs::exists(power_path(dir_, k));  // the index can outlive deleted files
    return false;
}

int PowerStore::max_exponent() const { return max_k_; }

std::vector<int> PowerStore::exponents_with_digest(std::uint64_t digest) const {
    auto it = index_.find(digest);
    return it == index_.end() ? std::vector<int>{} : it->second;
}

void PowerStore::write(const NormalizedPower& p) {
    if (has(p.k)) return;  // deterministic sequence: an existing file is identical

    const auto& entries = p.normalized.entries();
    Entry max_finite = 0;
    for (Entry e : entries)
        if (e < kInfinity) max_finite = std::max(max_finite, e);
    const std::uint8_t width = max_finite < 0xffff ? 2 : 4;

    FileHeader h;
    std::memset(&h, 0, sizeof h);  // padding bytes land on disk too
    std::memcpy(h.magic, kMagic, 8);
    h.dim = static_cast<std::uint32_t>(p.normalized.dim());
    h.k = static_cast<std::uint32_t>(p.k);
    h.width = width;
    h.all_infinite = p.all_infinite ? 1 : 0;
    h.offset = p.offset;
    h.digest = p.digest;

    const fs::path tmp = dir_ / ("tmp_" + std::to_string(p.k) + ".bin");
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out.write(reinterpret_cast<const char*>(&h), sizeof h);
        if (width == 2) {
            std::vector<std::uint16_t> buf(entries.size());
            for (std::size_t i = 0; i < entries.size(); ++i)
                buf[i] = entries[i] >= kInfinity ? 0xffffu : static_cast<std::uint16_t>(entries[i]);
            out.write(reinterpret_cast<const char*>(buf.data()), buf.size() * 2);
        } else {
            std::vector<std::uint32_t> buf(entries.size());
            for (std::size_t i = 0; i < entries.size(); ++i)
                buf[i] = entries[i] >= kInfinity ? 0xffffffffu
                                                 : static_cast<std::uint32_t>(entries[i]);
            out.write(reinterpret_cast<const char*>(buf.data()), buf.size() * 4);
        }
        if (!out) throw StoreError("cannot write power file " + tmp.string());
    }
    fs::rename(tmp, power_path(dir_, p.k));

    auto& ks = index_[p.digest];
    const auto pos = std::lower_bound(ks.begin(), ks.end(), p.k);
    if (pos == ks.end() || *pos != p.k) {
        std::ofstream idx(dir_ / "index.tsv", std::ios::app);
        idx << hex64(p.digest) << '\t' << p.k << '\n';
        if (!idx) throw StoreError("cannot append to power index in " + dir_.string());
        ks.insert(pos, p.k);
    }
    max_k_ = std::max(max_k_, p.k);
}

NormalizedPower PowerStore::read(int k) const {
    const fs::path path = power_path(dir_, k);
    std::ifstream in(path, std::ios::binary);
    if (!in) throw StoreError("missing power file " + path.string());

    FileHeader h{};
    in.read(reinterpret_cast<char*>(&h), sizeof h);
    if (!in || std::memcmp(h.magic, kMagic, 8) != 0 || h.k != static_cast<std::uint32_t>(k))
        throw StoreError("corrupt power file " + path.string());

    NormalizedPower p;
    p.k = k;
    p.all_infinite = h.all_infinite != 0;
    p.offset = h.offset;
    p.digest = h.digest;
    p.normalized = MinPlusMatrix(static_cast<int>(h.dim));
    const std::size_t count = static_cast<std::size_t>(h.dim) * h.dim;
    Entry* dst = p.normalized.data();
    if (h.width == 2) {
        std::vector<std::uint16_t> buf(count);
        in.read(reinterpret_cast<char*>(buf.data()), count * 2);
        for (std::size_t i = 0; i < count; ++i)
            dst[i] = buf[i] == 0xffffu ? kInfinity : static_cast<Entry>(buf[i]);
    } else if (h.width == 4) {
        std::vector<std::uint32_t> buf(count);
        in.read(reinterpret_cast<char*>(buf.data()), count * 4);
        for (std::size_t i = 0; i < count; ++i)
            dst[i] = buf[i] == 0xffffffffu ? kInfinity : static_cast<Entry>(buf[i]);
    } else {
        throw StoreError("corrupt power file " + path.string());
    }
    if (!in) throw StoreError("truncated power file " + path.string());
    return p;
}

PowerSequence::PowerSequence(MinPlusMatrix pi, PowerStore& store, int threads)
    : pi_(std::move(pi)), store_(store), threads_(threads) {}

const NormalizedPower& PowerSequence::next() {
    norm_.normalized = MinPlusMatrix();  // keep the working set at three matrices
    if (k_ == 0) {
        cur_ = pi_;
        k_ = 1;
    } else {
        cur_ = mul(pi_, cur_, threads_);
        ++k_;
    }
    norm_ = normalize_power(cur_, k_);
    store_.write(norm_);
    return norm_;
}

StabilityResult detect_stability(const MinPlusMatrix& pi, int cap, PowerStore& store,
                                 int threads) {
    if (cap < 2) throw std::invalid_argument("stability detection needs cap >= 2");

    StabilityResult result;
    result.cap = cap;
    if (pi.dim() == 0) {
        result.outcome = StabilityOutcome::NoCircuit;
        result.all_infinite_at = 0;
        return result;
    }

    PowerSequence seq(pi, store, threads);
    for (int k = 1; k <= cap; ++k) {
        const NormalizedPower& np = seq.next();
        if (np.all_infinite) {
            // No k-walk at all; longer walks cannot exist either.
            result.outcome = StabilityOutcome::NoCircuit;
            result.all_infinite_at = k;
            return result;
        }
        for (int k0 : store.exponents_with_digest(np.digest)) {
            if (k0 >= k) break;
            const NormalizedPower stored = store.read(k0);
            if (stored.all_infinite || !(stored.normalized == np.normalized)) continue;

            StabilityCert cert;
            cert.u = k0;
            cert.p = k - k0;
            cert.c = np.offset - stored.offset;
            cert.lambda = Rational(cert.c, cert.p);

            // One full extra period by explicit multiplication. A verified
            // match already implies stability for all i >= u, so a failure
            // here can only mean a defect in the pipeline.
            MinPlusMatrix cur = seq.current_power();
            for (int i = 1; i < cert.p; ++i) {
                cur = mul(pi, cur, threads);
                const NormalizedPower check = normalize_power(cur, k + i);
                const NormalizedPower ref = store.read(cert.u + i);
                if (check.all_infinite || ref.all_infinite ||
                    check.offset != ref.offset + cert.c ||
                    !(check.normalized == ref.normalized))
                    throw std::logic_error("pseudo-period re-verification failed");
            }
            cert.reverified = true;
            result.outcome = StabilityOutcome::Stable;
            result.cert = cert;
            return result;
        }
    }
    result.outcome = StabilityOutcome::NotFoundWithinCap;
    return result;
}

NormalizedPower power_at(const StabilityCert& cert, const PowerStore& store, int k) {
    if (k < 1) throw std::invalid_argument("matrix powers start at exponent 1");
    if (k < cert.u + cert.p) return store.read(k);
    const int r = (k - cert.u) % cert.p;
    const std::int64_t j = (k - cert.u) / cert.p;
    NormalizedPower p = store.read(cert.u + r);
    p.k = k;
    if (!p.all_infinite) p.offset += j * cert.c;
    return p;
}

}  // namespace gridcodes
