/**
 * Pure mappings from API responses to render models.
 *
 * Everything displayed is a field of a server response, reformatted but
 * never recomputed: probabilities come from the session state, partition
 * counts from the query response. The snapshot tests pin this down.
 */

import type { LeadingDiagnosis, QueryResponse, SessionState } from "./api.js";

export interface DiagnosisBar {
    label: string;
    percent: number;
    probabilityText: string;
}

export function diagnosisBars(leading: LeadingDiagnosis[]): DiagnosisBar[] {
    return leading.map((entry) => ({
        label: `{${entry.components.join(", ")}}`,
        percent: Math.round(entry.probability * 1000) / 10,
        probabilityText: entry.probability.toFixed(3),
    }));
}

export interface PartitionPreview {
    /** Diagnoses eliminated if the answer is yes (those predicting no). */
    eliminatedIfYes: number;
    /** Diagnoses eliminated if the answer is no (those predicting yes). */
    eliminatedIfNo: number;
    undecided: number;
}

export function partitionPreview(query: QueryResponse): PartitionPreview {
    return {
        eliminatedIfYes: query.partition.no,
        eliminatedIfNo: query.partition.yes,
        undecided: query.partition.undecided,
    };
}

export function queryPrompt(query: QueryResponse): string {
    return `Does ${query.proposition} hold in the system?`;
}

export interface TimelineEntry {
    atom: string;
    answerText: "yes" | "no";
}

export function historyTimeline(state: SessionState): TimelineEntry[] {
    return state.history.map((entry) => ({
        atom: entry.atom,
        answerText: entry.answer ? "yes" : "no",
    }));
}

export function statusBanner(state: SessionState): string {
    if (state.status === "done" && state.final !== null) {
        return `Diagnosis isolated: {${state.final.join(", ")}} after ` +
            `${state.measurement_count} measurement(s)`;
    }
    const count = state.leading.length;
    return `${count} candidate diagnos${count === 1 ? "is" : "es"} remaining`;
}
