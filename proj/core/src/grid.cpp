#include "solkin/grid.hpp"

#include <cmath>

#include "solkin/common.hpp"

namespace solkin {

Grid1D::Grid1D(std::vector<GridBlock> blocks) : blocks_(std::move(blocks)) {
    require(!blocks_.empty(), "Grid1D: needs at least one block");
    starts_.push_back(0);
    for (size_t b = 0; b < blocks_.size(); ++b) {
        const auto& blk = blocks_[b];
        require(blk.cells >= 1 && blk.dx > 0, "Grid1D: block must have cells >= 1, dx > 0");
        if (b > 0) {
            const auto& prev = blocks_[b - 1];
            double prev_right = prev.left + prev.cells * prev.dx;
            require(std::abs(prev_right - blk.left) <= 1e-12 * (std::abs(blk.left) + prev.dx),
                    "Grid1D: blocks must be contiguous");
            double coarse = std::max(prev.dx, blk.dx);
            double fine = std::min(prev.dx, blk.dx);
            double ratio = coarse / fine;
            require(std::abs(ratio - std::round(ratio)) < 1e-10 && std::round(ratio) >= 1,
                    "Grid1D: adjacent block widths must satisfy dx_coarse = m * dx_fine");
        }
        total_cells_ += blk.cells;
        starts_.push_back(total_cells_);
    }
}

Grid1D Grid1D::uniform(double left, double right, int cells) {
    require(right > left && cells >= 1, "Grid1D::uniform: invalid extent or cell count");
    return Grid1D({GridBlock{left, cells, (right - left) / cells}});
}

Grid1D Grid1D::three_block(double left, double right, int fine_cells, int coarse_cells, int m) {
    require(right > left, "Grid1D::three_block: invalid extent");
    require(fine_cells >= 1 && coarse_cells >= 1 && m >= 1, "Grid1D::three_block: invalid sizes");
    // 2*nf*dxf + nc*m*dxf = extent
    double dxf = (right - left) / (2.0 * fine_cells + static_cast<double>(m) * coarse_cells);
    double dxc = m * dxf;
    GridBlock lo{left, fine_cells, dxf};
    GridBlock mid{left + fine_cells * dxf, coarse_cells, dxc};
    GridBlock hi{mid.left + coarse_cells * dxc, fine_cells, dxf};
    return Grid1D({lo, mid, hi});
}

double Grid1D::right() const {
    const auto& b = blocks_.back();
    return b.left + b.cells * b.dx;
}

int Grid1D::block_of(int cell) const {
    for (int b = 0; b < nblocks(); ++b)
        if (cell < starts_[b + 1]) return b;
    return nblocks() - 1;
}

double Grid1D::cell_left(int cell) const {
    int b = block_of(cell);
    return blocks_[b].left + (cell - starts_[b]) * blocks_[b].dx;
}

std::vector<double> Grid1D::cell_edges() const {
    std::vector<double> e;
    e.reserve(ncells() + 1);
    for (int i = 0; i < ncells(); ++i) e.push_back(cell_left(i));
    e.push_back(right());
    return e;
}

bool Grid1D::operator==(const Grid1D& other) const {
    if (blocks_.size() != other.blocks_.size()) return false;
    for (size_t b = 0; b < blocks_.size(); ++b) {
        if (blocks_[b].left != other.blocks_[b].left || blocks_[b].cells != other.blocks_[b].cells ||
            blocks_[b].dx != other.blocks_[b].dx)
            return false;
    }
    return true;
}

}  // namespace solkin
