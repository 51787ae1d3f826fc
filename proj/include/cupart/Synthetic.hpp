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

/** \file     Synthetic.hpp
    \brief    generated blocks and frames for tests, toy training sets and smoke runs
*/

#pragma once

#include "cupart/MediaIo.hpp"

#include <cstdint>
#include <vector>

namespace cupart
{

LumaBlock makeConstantBlock( int size, uint8_t level );
/// Alternating cells of `cell` x `cell` samples, `low` at the top-left cell.
LumaBlock makeCheckerboardBlock( int size, int cell, uint8_t low, uint8_t high );

/// Constant blocks labelled non-split, high-contrast checkerboards (cell 1 .. size/2) labelled split.
std::vector<LabeledBlock> makeToyDataset( int cuSize, size_t count, uint64_t seed, double splitFraction = 0.5 );

Frame makeConstantFrame( int width, int height, uint8_t level, int index = 0 );
/// Slow ramps plus a gentle ripple; most CUs have a luma range well under 20.
Frame makeSmoothFrame( int width, int height, uint64_t seed, int index = 0 );
/// 16x16 patches of flat, ramp, noise and edge content at random amplitudes.
Frame makeMixedFrame( int width, int height, uint64_t seed, int index = 0 );

} // namespace cupart
