#include "guard/tile_grid.hpp"

#include "guard/errors.hpp"

namespace guard {

std::string_view to_string(Modality m) {
    switch (m) {
        case Modality::Vision: return "vision";
        case Modality::Lidar: return "lidar";
        case Modality::Audio: return "audio";
        case Modality::Language: return "language";
        case Modality::Comm: return "comm";
        case Modality::Control: return "control";
    }
    return "?";
}

Modality modality_from_string(std::string_view s) {
    if (s == "vision") return Modality::Vision;
    if (s == "lidar") return Modality::Lidar;
    if (s == "audio") return Modality::Audio;
    if (s == "language") return Modality::Language;
    if (s == "comm") return Modality::Comm;
    if (s == "control") return Modality::Control;
    throw ValidationError("unknown modality: '" + std::string(s) + "'");
}

TileGrid::TileGrid(int rows, int cols, std::vector<Tile> tiles)
    : rows_(rows), cols_(cols), tiles_(std::move(tiles)) {
    if (rows_ <= 0 || cols_ <= 0 ||
        tiles_.size() != static_cast<std::size_t>(rows_) * static_cast<std::size_t>(cols_))
        throw ValidationError("grid: tile list must have rows*cols entries");
}

bool TileGrid::has_modality(Modality m) const {
    for (const auto& t : tiles_)
        if (t.modality == m) return true;
    return false;
}

std::vector<int> TileGrid::tiles_of(Modality m) const {
    std::vector<int> out;
    for (int i = 0; i < tile_count(); ++i)
        if (tiles_[static_cast<std::size_t>(i)].modality == m) out.push_back(i);
    return out;
}

std::vector<Modality> TileGrid::present_modalities() const {
    std::vector<Modality> out;
    for (int m = 0; m < kModalityCount; ++m)
        if (has_modality(static_cast<Modality>(m))) out.push_back(static_cast<Modality>(m));
    return out;
}

}  // namespace guard
