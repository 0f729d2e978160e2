#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace guard {

/// Semantic function of a tile on the protected edge die.
enum class Modality : std::uint8_t { Vision, Lidar, Audio, Language, Comm, Control };

constexpr int kModalityCount = 6;

std::string_view to_string(Modality m);
Modality modality_from_string(std::string_view s);  // throws ValidationError

struct Tile {
    Modality modality = Modality::Vision;
    double baseline_rate = 0.0;  // mean ops/tick when the modality is fully loaded
};

/// Row-major grid of semantic tiles. Each tile is the unit both sensors and
/// attacks address.
class TileGrid {
public:
    TileGrid() = default;
    TileGrid(int rows, int cols, std::vector<Tile> tiles);

    int rows() const noexcept { return rows_; }
    int cols() const noexcept { return cols_; }
    int tile_count() const noexcept { return static_cast<int>(tiles_.size()); }

    int index(int row, int col) const noexcept { return row * cols_ + col; }
    const Tile& tile(int i) const { return tiles_[static_cast<std::size_t>(i)]; }
    const std::vector<Tile>& tiles() const noexcept { return tiles_; }

    bool has_modality(Modality m) const;
    std::vector<int> tiles_of(Modality m) const;
    /// Modalities present on the grid, in enum order.
    std::vector<Modality> present_modalities() const;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<Tile> tiles_;
};

}  // namespace guard
