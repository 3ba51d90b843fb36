#include "fundusquant/raster.hpp"

#include <algorithm>
#include <string>

namespace fundusquant {

std::size_t BinaryMask::count() const noexcept {
    auto d = data();
    return static_cast<std::size_t>(std::count_if(d.begin(), d.end(), [](std::uint8_t v) { return v != 0; }));
}

bool BinaryMask::empty() const noexcept {
    auto d = data();
    return std::none_of(d.begin(), d.end(), [](std::uint8_t v) { return v != 0; });
}

std::vector<Pixel> BinaryMask::pixels() const {
    std::vector<Pixel> out;
    for (int y = 0; y < height(); ++y) {
        for (int x = 0; x < width(); ++x) {
            if ((*this)(x, y)) out.push_back({x, y});
        }
    }
    return out;
}

void require_same_shape(const BinaryMask& a, const BinaryMask& b) {
    if (!a.same_shape(b)) {
        throw Error(ErrorCode::ShapeMismatch,
                    std::to_string(a.width()) + "x" + std::to_string(a.height()) + " vs " +
                        std::to_string(b.width()) + "x" + std::to_string(b.height()));
    }
}

namespace {
template <typename Op>
BinaryMask combine(const BinaryMask& a, const BinaryMask& b, Op op) {
    require_same_shape(a, b);
    BinaryMask out(a.width(), a.height());
    auto da = a.data();
    auto db = b.data();
    auto dst = out.data();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = op(da[i] != 0, db[i] != 0) ? 1 : 0;
    return out;
}
}  // namespace

BinaryMask BinaryMask::operator&(const BinaryMask& o) const {
    return combine(*this, o, [](bool p, bool q) { return p && q; });
}

BinaryMask BinaryMask::operator|(const BinaryMask& o) const {
    return combine(*this, o, [](bool p, bool q) { return p || q; });
}

BinaryMask BinaryMask::operator~() const {
    BinaryMask out(width(), height());
    auto src = data();
    auto dst = out.data();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = src[i] ? 0 : 1;
    return out;
}

bool BinaryMask::subset_of(const BinaryMask& o) const {
    require_same_shape(*this, o);
    auto a = data();
    auto b = o.data();
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] && !b[i]) return false;
    }
    return true;
}

BinaryMask BinaryMask::mirrored_horizontally() const {
    BinaryMask out(width(), height());
    for (int y = 0; y < height(); ++y) {
        for (int x = 0; x < width(); ++x) out(width() - 1 - x, y) = (*this)(x, y);
    }
    return out;
}

BinaryMask BinaryMask::rotated_90() const {
    BinaryMask out(height(), width());
    for (int y = 0; y < height(); ++y) {
        for (int x = 0; x < width(); ++x) out(height() - 1 - y, x) = (*this)(x, y);
    }
    return out;
}

BinaryMask LabelMap::select(std::uint8_t id) const {
    BinaryMask out(width(), height());
    auto src = data();
    auto dst = out.data();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = src[i] == id ? 1 : 0;
    return out;
}

void ProbMap::validate() const {
    for (double v : data()) {
        if (!(v >= 0.0 && v <= 1.0)) {
            throw Error(ErrorCode::DecodeError, "probability value outside [0,1]: " + std::to_string(v));
        }
    }
}

}  // namespace fundusquant
