#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace kdpp
{

/// Point x = index + 1/2 of the half-integer lattice.
struct Site
{
    std::int64_t index = 0;

    [[nodiscard]] double position() const { return static_cast<double>(index) + 0.5; }

    friend auto operator<=>(Site const&, Site const&) = default;
};

/// Contiguous inclusive block of sites [lo, hi].
class Window
{
  public:
    Window(Site lo, Site hi);
    static Window from_indices(std::int64_t lo, std::int64_t hi) { return {Site{lo}, Site{hi}}; }
    /// Window of `size` sites whose first site is `lo`.
    static Window with_size(std::int64_t lo, std::size_t size);

    [[nodiscard]] Site lo() const { return lo_; }
    [[nodiscard]] Site hi() const { return hi_; }
    [[nodiscard]] std::size_t size() const { return static_cast<std::size_t>(hi_.index - lo_.index + 1); }
    [[nodiscard]] bool contains(Site s) const { return s.index >= lo_.index && s.index <= hi_.index; }
    [[nodiscard]] bool contains(Window const& w) const { return contains(w.lo_) && contains(w.hi_); }
    /// Site at 0-based offset.
    [[nodiscard]] Site site(std::size_t offset) const { return Site{lo_.index + static_cast<std::int64_t>(offset)}; }
    /// 0-based offset of a contained site; throws WindowMismatch otherwise.
    [[nodiscard]] std::size_t offset(Site s) const;

    /// "lo..hi" in site indices.
    [[nodiscard]] std::string to_string() const;
    static Window parse(std::string_view text);

    friend bool operator==(Window const&, Window const&) = default;

  private:
    Site lo_;
    Site hi_;
};

/// Occupancy of every site of a window; the finite restriction of a
/// configuration in {0,1}^lattice.
class Configuration
{
  public:
    explicit Configuration(Window w);  // empty
    Configuration(Window w, std::vector<std::uint8_t> occupancy);

    /// Bit i of the mask is the occupancy of site offset i (leftmost site = LSB).
    static Configuration from_bitmask(Window w, std::uint64_t mask);
    /// One character per site from left to right, '1' occupied, '0' empty.
    static Configuration from_string(Window w, std::string_view bits);

    [[nodiscard]] Window const& window() const { return window_; }
    [[nodiscard]] std::size_t size() const { return occ_.size(); }
    [[nodiscard]] bool occupied(Site s) const { return occ_[window_.offset(s)] != 0; }
    [[nodiscard]] bool at(std::size_t offset) const { return occ_[offset] != 0; }
    void set(Site s, bool value) { occ_[window_.offset(s)] = value ? 1 : 0; }
    void set_at(std::size_t offset, bool value) { occ_[offset] = value ? 1 : 0; }
    [[nodiscard]] std::size_t particle_count() const;
    [[nodiscard]] std::vector<std::uint8_t> const& occupancy() const { return occ_; }

    /// Requires size() <= 64.
    [[nodiscard]] std::uint64_t bitmask() const;
    [[nodiscard]] std::string to_string() const;

    friend bool operator==(Configuration const&, Configuration const&) = default;

  private:
    Window window_;
    std::vector<std::uint8_t> occ_;
};

/// Transposition of two distinct sites.
class SwapPair
{
  public:
    SwapPair(Site x, Site y);

    [[nodiscard]] Site x() const { return x_; }
    [[nodiscard]] Site y() const { return y_; }

    friend bool operator==(SwapPair const&, SwapPair const&) = default;

  private:
    Site x_;
    Site y_;
};

/// Throws WindowMismatch unless both windows agree.
void require_same_window(Window const& a, Window const& b, char const* what);

}  // namespace kdpp
