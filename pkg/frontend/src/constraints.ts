/** Draft constraints and their canonical serialization.
 *
 * The serialized form must match the engine's canonical constraints JSON
 * byte for byte: object keys sorted, entries sorted, compact separators.
 */

import type { RequiredSpan, WireConstraints } from "./types.js";

export type SpanMode = "require" | "forbid";

export interface SpanConstraint {
    i: number;
    j: number;
    mode: SpanMode;
    category?: string;
}

export interface DraftConstraints {
    spans: SpanConstraint[];
    /** token index -> pinned sense id */
    pins: Record<number, string>;
}

export function emptyDraft(): DraftConstraints {
    return { spans: [], pins: {} };
}

export function isDraftEmpty(draft: DraftConstraints): boolean {
    return draft.spans.length === 0 && Object.keys(draft.pins).length === 0;
}

/** Toggle a span constraint: identical entry removes it, a differing entry
 * for the same (i, j) replaces the prior one. */
export function toggleSpan(
    draft: DraftConstraints,
    i: number,
    j: number,
    mode: SpanMode,
    category?: string,
): DraftConstraints {
    const existing = draft.spans.find((s) => s.i === i && s.j === j);
    const rest = draft.spans.filter((s) => !(s.i === i && s.j === j));
    if (existing && existing.mode === mode && existing.category === category) {
        return { ...draft, spans: rest };
    }
    return { ...draft, spans: [...rest, { i, j, mode, category }] };
}

export function pinSense(draft: DraftConstraints, tokenIndex: number, senseId: string | null): DraftConstraints {
    const pins = { ...draft.pins };
    if (senseId === null) {
        delete pins[tokenIndex];
    } else {
        pins[tokenIndex] = senseId;
    }
    return { ...draft, pins };
}

export function draftToWire(draft: DraftConstraints): WireConstraints {
    const required: RequiredSpan[] = draft.spans
        .filter((s) => s.mode === "require")
        .sort((a, b) => a.i - b.i || a.j - b.j || (a.category ?? "").localeCompare(b.category ?? ""))
        .map((s) => (s.category ? [s.i, s.j, s.category] : [s.i, s.j]));
    const forbidden: [number, number][] = draft.spans
        .filter((s) => s.mode === "forbid")
        .sort((a, b) => a.i - b.i || a.j - b.j)
        .map((s) => [s.i, s.j]);
    const pinned = Object.entries(draft.pins)
        .map(([index, senseId]) => ({ token_index: Number(index), sense_id: senseId }))
        .sort((a, b) => a.token_index - b.token_index);
    return { required_spans: required, forbidden_spans: forbidden, pinned_senses: pinned };
}

/** JSON with sorted object keys and no whitespace, matching the engine's
 * json.dumps(..., sort_keys=True, separators=(",", ":")). */
export function canonicalJson(value: unknown): string {
    if (value === null || typeof value === "number" || typeof value === "boolean" || typeof value === "string") {
        return JSON.stringify(value);
    }
    if (Array.isArray(value)) {
        return "[" + value.map(canonicalJson).join(",") + "]";
    }
    const record = value as Record<string, unknown>;
    const body = Object.keys(record)
        .sort()
        .map((key) => JSON.stringify(key) + ":" + canonicalJson(record[key]))
        .join(",");
    return "{" + body + "}";
}

export function serializeConstraints(draft: DraftConstraints): string {
    return canonicalJson(draftToWire(draft));
}
