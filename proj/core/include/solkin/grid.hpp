#pragma once

#include <vector>

namespace solkin {

struct GridBlock {
    double left = 0.0;
    int cells = 0;
    double dx = 0.0;
};

// 1D mesh made of contiguous blocks, each uniform. Adjacent block widths
// satisfy dx_coarse = m * dx_fine for an integer m >= 1. Immutable after
// construction.
class Grid1D {
  public:
    Grid1D() = default;
    explicit Grid1D(std::vector<GridBlock> blocks);

    static Grid1D uniform(double left, double right, int cells);
    // fine | coarse | fine layout on [left,right] with dx_coarse = m * dx_fine.
    static Grid1D three_block(double left, double right, int fine_cells, int coarse_cells, int m);

    const std::vector<GridBlock>& blocks() const { return blocks_; }
    int nblocks() const { return static_cast<int>(blocks_.size()); }
    int ncells() const { return total_cells_; }
    double left() const { return blocks_.front().left; }
    double right() const;
    double extent() const { return right() - left(); }

    int block_of(int cell) const;
    int block_start(int b) const { return starts_[b]; }
    double cell_left(int cell) const;
    double cell_width(int cell) const { return blocks_[block_of(cell)].dx; }
    std::vector<double> cell_edges() const;

    bool operator==(const Grid1D& other) const;

  private:
    std::vector<GridBlock> blocks_;
    std::vector<int> starts_;  // cumulative cell offsets, size nblocks+1
    int total_cells_ = 0;
};

// Phase-space grid: block-structured x, single uniform v block with
// shrinkable symmetric bounds.
struct PhaseGrid {
    Grid1D x;
    Grid1D v;
};

}  // namespace solkin
