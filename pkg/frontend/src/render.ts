/** Pure view functions: state in, HTML strings out.
 *
 * Every number, gloss, and tree field rendered here is taken verbatim from
 * the last TranslateResponse; the view invents nothing.
 */

import type { DraftConstraints } from "./constraints.js";
import type { Breakdown, SentenceView, TokenView, TreeNode } from "./types.js";
import { isLeaf } from "./types.js";

export function escapeHtml(text: string): string {
    return text
        .replace(/&/g, "&amp;")
        .replace(/</g, "&lt;")
        .replace(/>/g, "&gt;")
        .replace(/"/g, "&quot;");
}

export function renderTokens(tokens: TokenView[], draft: DraftConstraints): string {
    const opens = new Map<number, string[]>();
    const closes = new Map<number, string[]>();
    const push = (table: Map<number, string[]>, key: number, label: string) => {
        const list = table.get(key) ?? [];
        list.push(label);
        table.set(key, list);
    };
    for (const span of draft.spans) {
        push(opens, span.i, span.mode === "require" ? (span.category ? `[${span.category}` : "[") : "[x");
        push(closes, span.j - 1, "]");
    }
    const chips = tokens.map((token) => {
        const pin = draft.pins[token.index];
        const senseOptions = ['<option value="">(no pin)</option>']
            .concat(
                token.senses.map(
                    (sense) =>
                        `<option value="${escapeHtml(sense)}"${pin === sense ? " selected" : ""}>${escapeHtml(sense)}</option>`,
                ),
            )
            .join("");
        const open = (opens.get(token.index) ?? [])
            .map((label) => `<span class="bracket">${escapeHtml(label)}</span>`)
            .join("");
        const close = (closes.get(token.index) ?? [])
            .map((label) => `<span class="bracket">${escapeHtml(label)}</span>`)
            .join("");
        return (
            `${open}<span class="token${pin ? " pinned" : ""}" data-index="${token.index}">` +
            `<span class="surface">${escapeHtml(token.surface)}</span>` +
            `<span class="idx">${token.index}</span>` +
            `<select class="pin" data-index="${token.index}">${senseOptions}</select>` +
            `</span>${close}`
        );
    });
    return `<div class="tokens">${chips.join(" ")}</div>`;
}

export function renderTree(node: TreeNode): string {
    if (isLeaf(node)) {
        return (
            `<div class="leaf">${escapeHtml(node.cat)} · ${escapeHtml(node.surface)}` +
            ` → <b>${escapeHtml(node.ja) || "∅"}</b> <code>${escapeHtml(node.sense)}</code></div>`
        );
    }
    const children = node.children.map(renderTree).join("");
    return (
        `<details open><summary>${escapeHtml(node.cat)} ` +
        `<span class="span">[${node.span[0]},${node.span[1]})</span> ` +
        `<code>${escapeHtml(node.rule)}</code></summary>` +
        `<div class="kids">${children}</div></details>`
    );
}

const EXPERTS: (keyof Breakdown)[] = ["s_lex", "s_rule", "s_arg", "s_conj"];

export function renderBars(breakdown: Breakdown): string {
    const scale = Math.max(...EXPERTS.map((key) => Math.abs(breakdown[key])), 1e-9);
    const rows = EXPERTS.map((key) => {
        const value = breakdown[key];
        const width = Math.round((Math.abs(value) / scale) * 100);
        const sign = value < 0 ? " negative" : "";
        return (
            `<div class="bar-row"><span class="bar-label">${key}</span>` +
            `<span class="bar${sign}" style="width:${width}px"></span>` +
            `<span class="bar-value">${value}</span></div>`
        );
    });
    return `<div class="bars">${rows.join("")}</div>`;
}

export function renderAlternatives(sentence: SentenceView, selected: number): string {
    const items = sentence.alternatives.map((alt, index) => {
        const marker = index === selected ? " selected" : "";
        return (
            `<li class="alt${marker}" data-alt="${index}">` +
            `<span class="alt-total">${alt.total}</span>` +
            `<span class="alt-ja">${escapeHtml(alt.japanese)}</span>` +
            renderBars(alt.breakdown) +
            `</li>`
        );
    });
    return `<ol class="alternatives">${items.join("")}</ol>`;
}

export function renderSentence(sentence: SentenceView, draft: DraftConstraints, selected: number): string {
    const badge =
        `<span class="badge">parses ${escapeHtml(sentence.parse_count)}</span>` +
        (sentence.log10_count === null
            ? ""
            : `<span class="badge">log10 ${sentence.log10_count.toFixed(3)}</span>`);
    const status = `<span class="status status-${sentence.status}">${sentence.status}</span>`;
    const pieces = [
        `<div class="sentence-head">${status}${badge}</div>`,
        renderTokens(sentence.tokens, draft),
    ];
    if (sentence.status === "ok" && sentence.best) {
        pieces.push(`<div class="output">${escapeHtml(sentence.japanese)}</div>`);
        pieces.push(`<div class="tree">${renderTree(sentence.best.tree)}</div>`);
        pieces.push(renderAlternatives(sentence, selected));
    } else if (sentence.error) {
        pieces.push(`<div class="problem">${escapeHtml(sentence.error)}</div>`);
    }
    return `<section class="sentence">${pieces.join("")}</section>`;
}

export function renderSentences(sentences: SentenceView[], draft: DraftConstraints, selected: number): string {
    return sentences.map((sentence, index) => renderSentence(sentence, draft, index === 0 ? selected : 0)).join("");
}
