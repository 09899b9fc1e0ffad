/** Display formatting: one decimal for percentages and GW, matching the
 * CLI's text rendering. Formatting is the only arithmetic the UI performs
 * on API numbers. */

export function formatPercent(probability: number): string {
  return `${(probability * 100).toFixed(1)}%`;
}

export function formatGw(gw: number | null | undefined): string {
  if (gw === null || gw === undefined) return "";
  return `${gw.toFixed(1)} GW`;
}
