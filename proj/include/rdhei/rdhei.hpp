#pragma once

// Everything: image and bit-stream primitives, the room generation
// algorithm, both protocols, metrics and the batch report.

#include "rdhei/arnold.hpp"
#include "rdhei/bits.hpp"
#include "rdhei/block_grid.hpp"
#include "rdhei/coder.hpp"
#include "rdhei/erga.hpp"
#include "rdhei/error.hpp"
#include "rdhei/huffman.hpp"
#include "rdhei/image.hpp"
#include "rdhei/io.hpp"
#include "rdhei/keystream.hpp"
#include "rdhei/metrics.hpp"
#include "rdhei/modulation.hpp"
#include "rdhei/predictor.hpp"
#include "rdhei/range_coder.hpp"
#include "rdhei/report.hpp"
#include "rdhei/schemes.hpp"
