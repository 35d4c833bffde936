/* udiv7: unsigned 32-bit division by 7 (single wide high-half multiply by the shifted magic constant).
 * Authored from the package's abstract lowering sequences, not transcribed from any compiler's output.
 */
#include <stdint.h>

uint32_t udiv7(uint32_t x) {
    /* high 64 bits of x * 0x24924924a0000000, by 32-bit halves of the constant */
    uint64_t xw = x;
    uint64_t mid = (xw * (uint64_t)0xa0000000u) >> 32;
    return (uint32_t)((xw * (uint64_t)0x24924924u + mid) >> 32);
}
