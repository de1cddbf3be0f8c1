// SPDX-License-Identifier: Apache-2.0
#include "qmagic/stabilizer_set.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <map>
#include <mutex>
#include <functional>
#include <sstream>

namespace qmagic {

namespace {

constexpr Complex kPhases[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};  // i^k

// all k-subsets of {0..n-1} as sorted index lists
void for_each_combination(int n, int k, const std::function<void(const std::vector<int>&)>& fn) {
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i;
    if (k == 0) {
        fn(idx);
        return;
    }
    while (true) {
        fn(idx);
        int i = k - 1;
        while (i >= 0 && idx[i] == n - k + i) --i;
        if (i < 0) break;
        ++idx[i];
        for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

} // namespace

std::size_t stabilizer_state_count(int n) {
    std::size_t count = std::size_t(1) << n;
    for (int k = 1; k <= n; ++k) count *= (std::size_t(1) << k) + 1;
    return count;
}

StabilizerStateSet enumerate_stabilizer_states(int n) {
    if (n < 1 || n > 4)
        throw CapacityError("enumerate_stabilizer_states: n <= 4 supported, got " +
                            std::to_string(n));
    StabilizerStateSet set;
    set.n = n;
    set.states.reserve(stabilizer_state_count(n));
    const std::size_t dim = std::size_t(1) << n;

    for (int k = 0; k <= n; ++k) {
        for_each_combination(n, k, [&](const std::vector<int>& pivots) {
            // free slots of a reduced-echelon basis: row i may have entries at
            // non-pivot columns above its own pivot
            std::vector<std::pair<int, int>> free_slots;  // (row, column)
            for (int i = 0; i < k; ++i) {
                for (int c = pivots[i] + 1; c < n; ++c) {
                    bool is_pivot = false;
                    for (int j = 0; j < k; ++j) is_pivot |= (pivots[j] == c);
                    if (!is_pivot) free_slots.emplace_back(i, c);
                }
            }
            std::vector<int> shift_cols;  // coset representative support
            for (int c = 0; c < n; ++c) {
                bool is_pivot = false;
                for (int j = 0; j < k; ++j) is_pivot |= (pivots[j] == c);
                if (!is_pivot) shift_cols.push_back(c);
            }
            const int nf = static_cast<int>(free_slots.size());
            const int ns = static_cast<int>(shift_cols.size());
            const int nq = k * (k - 1) / 2;

            std::vector<std::uint32_t> rows(k);
            for (std::uint32_t fbits = 0; fbits < (1u << nf); ++fbits) {
                for (int i = 0; i < k; ++i) rows[i] = 1u << pivots[i];
                for (int f = 0; f < nf; ++f)
                    if ((fbits >> f) & 1) rows[free_slots[f].first] |= 1u << free_slots[f].second;

                for (std::uint32_t sbits = 0; sbits < (1u << ns); ++sbits) {
                    std::uint32_t shift = 0;
                    for (int sc = 0; sc < ns; ++sc)
                        if ((sbits >> sc) & 1) shift |= 1u << shift_cols[sc];

                    for (std::uint32_t qbits = 0; qbits < (1u << nq); ++qbits) {
                        for (std::uint32_t cbits = 0; cbits < (1u << k); ++cbits) {
                            for (std::uint32_t dbits = 0; dbits < (1u << k); ++dbits) {
                                StabilizerState st;
                                st.amps = VectorC::Zero(static_cast<Eigen::Index>(dim));
                                const double norm = std::pow(0.5, 0.5 * k);
                                for (std::uint32_t t = 0; t < (1u << k); ++t) {
                                    std::uint32_t xval = shift;
                                    for (int i = 0; i < k; ++i)
                                        if ((t >> i) & 1) xval ^= rows[i];
                                    int ipow = std::popcount(t & cbits) & 3;
                                    int sgn = std::popcount(t & dbits) & 1;
                                    int qi = 0;
                                    for (int a = 0; a < k; ++a)
                                        for (int b = a + 1; b < k; ++b, ++qi)
                                            sgn ^= ((t >> a) & (t >> b) & (qbits >> qi)) & 1;
                                    Complex amp = kPhases[ipow] * norm;
                                    if (sgn) amp = -amp;
                                    st.amps(xval) = amp;
                                }
                                std::ostringstream lbl;
                                lbl << "k" << k << ";r";
                                for (int i = 0; i < k; ++i) lbl << rows[i] << (i + 1 < k ? "," : "");
                                lbl << ";s" << shift << ";q" << qbits << ";c" << cbits << ";d"
                                    << dbits;
                                st.label = lbl.str();
                                set.states.push_back(std::move(st));
                            }
                        }
                    }
                }
            }
        });
    }
    if (set.states.size() != stabilizer_state_count(n))
        throw std::logic_error("stabilizer enumeration produced an unexpected count");
    return set;
}

std::shared_ptr<const StabilizerStateSet> stabilizer_states_cached(int n) {
    static std::mutex mu;
    static std::map<int, std::shared_ptr<const StabilizerStateSet>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    auto set = std::make_shared<StabilizerStateSet>(enumerate_stabilizer_states(n));
    cache[n] = set;
    return set;
}

void save_stabilizer_set(const StabilizerStateSet& set, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot open " + path + " for writing");
    const char magic[6] = {'Q', 'S', 'T', 'B', '1', '\n'};
    out.write(magic, sizeof(magic));
    const std::uint32_t n = static_cast<std::uint32_t>(set.n);
    const std::uint64_t count = set.states.size();
    out.write(reinterpret_cast<const char*>(&n), sizeof(n));
    out.write(reinterpret_cast<const char*>(&count), sizeof(count));
    for (const auto& st : set.states) {
        const std::uint32_t len = static_cast<std::uint32_t>(st.label.size());
        out.write(reinterpret_cast<const char*>(&len), sizeof(len));
        out.write(st.label.data(), len);
        out.write(reinterpret_cast<const char*>(st.amps.data()),
                  static_cast<std::streamsize>(sizeof(Complex) * st.amps.size()));
    }
}

StabilizerStateSet load_stabilizer_set(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open " + path);
    char magic[6];
    in.read(magic, sizeof(magic));
    if (!in || std::string(magic, 6) != "QSTB1\n")
        throw ValidationError("stabilizer cache: bad header in " + path);
    std::uint32_t n = 0;
    std::uint64_t count = 0;
    in.read(reinterpret_cast<char*>(&n), sizeof(n));
    in.read(reinterpret_cast<char*>(&count), sizeof(count));
    if (!in || n < 1 || n > 4 || count != stabilizer_state_count(static_cast<int>(n)))
        throw ValidationError("stabilizer cache: corrupt metadata in " + path);
    StabilizerStateSet set;
    set.n = static_cast<int>(n);
    const Eigen::Index dim = Eigen::Index(1) << n;
    set.states.resize(count);
    for (auto& st : set.states) {
        std::uint32_t len = 0;
        in.read(reinterpret_cast<char*>(&len), sizeof(len));
        if (!in || len > 4096) throw ValidationError("stabilizer cache: corrupt label");
        st.label.resize(len);
        in.read(st.label.data(), len);
        st.amps.resize(dim);
        in.read(reinterpret_cast<char*>(st.amps.data()),
                static_cast<std::streamsize>(sizeof(Complex) * dim));
        if (!in) throw ValidationError("stabilizer cache: truncated file");
    }
    return set;
}

double best_pure_stabilizer_fidelity(const DensityMatrix& rho) {
    if (rho.n() > 4)
        throw CapacityError("best_pure_stabilizer_fidelity: n <= 4 supported");
    auto set = stabilizer_states_cached(rho.n());
    double best = 0.0;
    for (const auto& st : set->states) {
        const double f = (st.amps.adjoint() * rho.mat() * st.amps).value().real();
        best = std::max(best, f);
    }
    return best;
}

} // namespace qmagic
