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

/** \file     tensor.cpp
    \brief    dense row-major float64 array with shape metadata
*/

#include "cupart/Tensor.hpp"
#include "cupart/Error.hpp"

#include <algorithm>
#include <cmath>

namespace cupart
{

size_t shapeVolume( const std::vector<int>& shape )
{
  size_t volume = 1;
  for( const int d: shape )
  {
    if( d < 0 )
    {
      throw ShapeError( "negative tensor dimension" );
    }
    volume *= static_cast<size_t>( d );
  }
  return volume;
}

Tensor::Tensor( std::vector<int> shape, double fill )
  : m_shape( std::move( shape ) ), m_values( shapeVolume( m_shape ), fill )
{
}

Tensor::Tensor( std::vector<int> shape, std::vector<double> values )
  : m_shape( std::move( shape ) ), m_values( values.begin(), values.end() )
{
  if( m_values.size() != shapeVolume( m_shape ) )
  {
    throw ShapeError( "tensor data length " + std::to_string( m_values.size() ) + " does not match shape "
                      + shapeString() );
  }
}

void Tensor::fill( double value )
{
  std::fill( m_values.begin(), m_values.end(), value );
}

void Tensor::reshape( std::vector<int> shape )
{
  if( shapeVolume( shape ) != m_values.size() )
  {
    throw ShapeError( "reshape changes tensor volume" );
  }
  m_shape = std::move( shape );
}

bool Tensor::allFinite() const
{
  return std::all_of( m_values.begin(), m_values.end(), []( double v ) { return std::isfinite( v ); } );
}

std::string Tensor::shapeString() const
{
  std::string out = "[";
  for( size_t i = 0; i < m_shape.size(); i++ )
  {
    out += ( i ? "," : "" ) + std::to_string( m_shape[i] );
  }
  return out + "]";
}

void requireFinite( const Tensor& tensor, std::string_view where )
{
  if( !tensor.allFinite() )
  {
    throw NumericError( "non-finite value in " + std::string( where ) );
  }
}

} // namespace cupart
