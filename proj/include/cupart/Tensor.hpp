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

/** \file     Tensor.hpp
    \brief    dense row-major float64 array with shape metadata
*/

#pragma once

#include <cstddef>
#include <new>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cupart
{

/// 64-byte aligned storage, so vectorized kernels see the same alignment on every run.
template<typename T>
struct AlignedAllocator
{
  using value_type = T;
  static constexpr std::align_val_t kAlignment{ 64 };

  AlignedAllocator() = default;
  template<typename U>
  AlignedAllocator( const AlignedAllocator<U>& )
  {
  }

  T*   allocate( size_t n ) { return static_cast<T*>( ::operator new( n * sizeof( T ), kAlignment ) ); }
  void deallocate( T* p, size_t ) { ::operator delete( p, kAlignment ); }

  template<typename U>
  bool operator==( const AlignedAllocator<U>& ) const
  {
    return true;
  }
};

using AlignedValues = std::vector<double, AlignedAllocator<double>>;

size_t shapeVolume( const std::vector<int>& shape );

class Tensor
{
public:
  Tensor() = default;
  explicit Tensor( std::vector<int> shape, double fill = 0.0 );
  Tensor( std::vector<int> shape, std::vector<double> values );

  const std::vector<int>& shape() const { return m_shape; }
  int                     rank() const { return static_cast<int>( m_shape.size() ); }
  int                     dim( int axis ) const { return m_shape.at( axis ); }
  size_t                  size() const { return m_values.size(); }
  bool                    empty() const { return m_values.empty(); }

  double*                 data() { return m_values.data(); }
  const double*           data() const { return m_values.data(); }
  std::span<double>       values() { return m_values; }
  std::span<const double> values() const { return m_values; }
  double&                 operator[]( size_t i ) { return m_values[i]; }
  double                  operator[]( size_t i ) const { return m_values[i]; }

  void fill( double value );
  /// Same volume, new shape.
  void reshape( std::vector<int> shape );
  bool allFinite() const;

  std::string shapeString() const;

  bool operator==( const Tensor& ) const = default;

private:
  std::vector<int>    m_shape;
  AlignedValues       m_values;
};

/// Throws NumericError naming `where` when a value is NaN or infinite.
void requireFinite( const Tensor& tensor, std::string_view where );

} // namespace cupart
