/* The copyright in this software is being made available under the BSD
 * License, included below. This software may be subject to other third party
 * and contributor rights, including patent rights, and no such rights are
 * granted under this license.
 *
 * Copyright (c) 2026, The cupart Authors
 * All rights reserved.
 *
 * Redistribution and use in source and binary forms, with or without
 * modification, are permitted provided that the following conditions are met:
 *
 *  * Redistributions of source code must retain the above copyright notice,
 *    this list of conditions and the following disclaimer.
 *  * Redistributions in binary form must reproduce the above copyright notice,
 *    this list of conditions and the following disclaimer in the documentation
 *    and/or other materials provided with the distribution.
 *  * Neither the name of the copyright holder nor the names of its contributors
 *    may be used to endorse or promote products derived from this software
 *    without specific prior written permission.
 *
 * THIS SOFTWARE IS PROVIDED BY THE COPYRIGHT HOLDERS AND CONTRIBUTORS "AS IS"
 * AND ANY EXPRESS OR IMPLIED WARRANTIES, INCLUDING, BUT NOT LIMITED TO, THE
 * IMPLIED WARRANTIES OF MERCHANTABILITY AND FITNESS FOR A PARTICULAR PURPOSE
 * ARE DISCLAIMED. IN NO EVENT SHALL THE COPYRIGHT HOLDER OR CONTRIBUTORS
 * BE LIABLE FOR ANY DIRECT, INDIRECT, INCIDENTAL, SPECIAL, EXEMPLARY, OR
 * CONSEQUENTIAL DAMAGES (INCLUDING, BUT NOT LIMITED TO, PROCUREMENT OF
 * SUBSTITUTE GOODS OR SERVICES; LOSS OF USE, DATA, OR PROFITS; OR BUSINESS
 * INTERRUPTION) HOWEVER CAUSED AND ON ANY THEORY OF LIABILITY, WHETHER IN
 * CONTRACT, STRICT LIABILITY, OR TORT (INCLUDING NEGLIGENCE OR OTHERWISE)
 * ARISING IN ANY WAY OUT OF THE USE OF THIS SOFTWARE, EVEN IF ADVISED OF
 * THE POSSIBILITY OF SUCH DAMAGE.
 */

/** \file     MediaIo.hpp
    \brief    raw YUV / PGM ingestion, CTU padding and CU block slicing
*/

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace cupart
{

constexpr int kCtuSize = 64;
constexpr int kMinCuSize = 8;
constexpr uint8_t kMissingReference = 128;

inline bool isCuSize( int size )
{
  return size == 64 || size == 32 || size == 16 || size == 8;
}

/// Sizes that carry a split/non-split decision (depths 0..2).
inline bool isDecisionSize( int size )
{
  return size == 64 || size == 32 || size == 16;
}

/// Luma plane padded to a multiple of the CTU size by edge replication.
struct Frame
{
  int                  index        = 0;
  int                  width        = 0;
  int                  height       = 0;
  int                  sourceWidth  = 0;
  int                  sourceHeight = 0;
  std::vector<uint8_t> luma;

  uint8_t at( int x, int y ) const { return luma[static_cast<size_t>( y ) * width + x]; }
  int     ctuColumns() const { return width / kCtuSize; }
  int     ctuRows() const { return height / kCtuSize; }
};

struct BlockOrigin
{
  int frameIndex = 0;
  int x          = 0;
  int y          = 0;

  bool operator==( const BlockOrigin& ) const = default;
};

/// Prediction references: the row above and the column left of a block, `size` samples each.
/// Outside the frame the nearest edge sample is repeated; standalone blocks use kMissingReference.
struct IntraRefs
{
  std::vector<uint8_t> top;
  std::vector<uint8_t> left;

  bool operator==( const IntraRefs& ) const = default;
};

struct LumaBlock
{
  int                  size = 0;
  std::vector<uint8_t> samples;
  BlockOrigin          origin;
  IntraRefs            refs;

  uint8_t at( int x, int y ) const { return samples[static_cast<size_t>( y ) * size + x]; }
};

/// A CU together with its ground-truth split flag (1 = split).
struct LabeledBlock
{
  LumaBlock block;
  uint8_t   splitFlag = 0;
};

/// Wraps an unpadded plane; pads to CTU multiples.
Frame makeFrame( int width, int height, std::vector<uint8_t> luma, int index = 0 );

/// Standalone block whose references are all kMissingReference.
LumaBlock makeBlock( int size, std::vector<uint8_t> samples, BlockOrigin origin = {} );

LumaBlock extractBlock( const Frame& frame, int x, int y, int size );

/// Z-order quadrant (0 TL, 1 TR, 2 BL, 3 BR) with references derived from the parent,
/// identical to extracting the same area from the frame.
LumaBlock quadrant( const LumaBlock& parent, int index );

std::vector<LumaBlock> tile( const Frame& frame, int size );

std::vector<Frame> loadYuv420( const std::filesystem::path& path, int width, int height );
Frame              loadPgm( const std::filesystem::path& path, int index = 0 );

/// Writes the padded luma plane as I420 with neutral chroma.
void writeYuv420( const std::filesystem::path& path, std::span<const Frame> frames );
void writePgm( const std::filesystem::path& path, const Frame& frame );

/// Accepts .yuv files (needs width/height), .pgm files and directories of .pgm files
/// (sorted by name). Frames are re-indexed in load order.
std::vector<Frame> loadCorpus( std::span<const std::filesystem::path> inputs, int width = 0, int height = 0 );

} // namespace cupart
