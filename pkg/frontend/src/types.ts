/** Wire types mirroring the translation service JSON. */

export interface TokenView {
    surface: string;
    norm: string;
    index: number;
    /** candidate sense ids for pinning */
    senses: string[];
}

export interface Breakdown {
    s_lex: number;
    s_rule: number;
    s_arg: number;
    s_conj: number;
    total: number;
}

export interface PhraseNode {
    cat: string;
    rule: string;
    span: [number, number];
    children: TreeNode[];
}

export interface LeafNode {
    cat: string;
    span: [number, number];
    token_index: number;
    surface: string;
    sense: string;
    ja: string;
}

export type TreeNode = PhraseNode | LeafNode;

export function isLeaf(node: TreeNode): node is LeafNode {
    return !("children" in node);
}

export interface BestView {
    signature: string[];
    breakdown: Breakdown;
    tree: TreeNode;
}

export interface AlternativeView {
    signature: string[];
    total: number;
    japanese: string;
    breakdown: Breakdown;
}

export interface SentenceView {
    tokens: TokenView[];
    status: "ok" | "no-parse" | "unknown-token" | "constraints-unsatisfiable";
    japanese: string;
    parse_count: string;
    log10_count: number | null;
    best: BestView | null;
    alternatives: AlternativeView[];
    error?: string;
    longest_span?: [number, number];
}

export interface TranslateResponse {
    sentences: SentenceView[];
}

export interface ResourcesInfo {
    rules: number;
    senses: number;
    sem_nodes: number;
    xforms: number;
    fingerprint: string;
}

export type RequiredSpan = [number, number] | [number, number, string];

export interface WireConstraints {
    required_spans: RequiredSpan[];
    forbidden_spans: [number, number][];
    pinned_senses: { token_index: number; sense_id: string }[];
}
